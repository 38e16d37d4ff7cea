// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "cpir/error.hpp"
#include "cpir/privacy_audit.hpp"

using namespace cpir;

TEST_CASE("expected census") {
    auto c = expected_census(CodeParams::make(5, 3, 2));
    CHECK(c == std::map<MessageSubset, std::size_t>{{1, 3}, {2, 3}, {3, 2}});
    auto k_eq_n = expected_census(CodeParams::make(3, 3, 2));
    CHECK(k_eq_n == std::map<MessageSubset, std::size_t>{{1, 3}, {2, 3}});
}

TEST_CASE("exact shape invariance") {
    SUBCASE("(5,3,2)") {
        auto r = exact_shape_invariance(CodeParams::make(5, 3, 2));
        CHECK(r.pass);
        CHECK(r.violations.empty());
    }
    SUBCASE("(3,2,3)") {
        CHECK(exact_shape_invariance(CodeParams::make(3, 2, 3), 5).pass);
    }
    SUBCASE("perturbed census fixture fails") {
        auto r = exact_shape_invariance(CodeParams::make(5, 3, 2), 0, fixtures::perturbed_census_plan);
        CHECK_FALSE(r.pass);
        REQUIRE_FALSE(r.violations.empty());
        CHECK(r.violations.front().db == 0);
    }
    SUBCASE("leak fixture keeps the census") {
        CHECK(exact_shape_invariance(CodeParams::make(3, 2, 2), 0, fixtures::leaky_plan).pass);
    }
}

TEST_CASE("database view hides private state") {
    QueryPlan plan = plan_queries(CodeParams::make(3, 2, 2), 1, 3);
    ViewSample v = database_view(plan, 2);
    CHECK(v.db == 2);
    CHECK(v.equations == plan.queries[2]);
}

TEST_CASE("empirical view test") {
    SUBCASE("(2,1,2) passes") {
        auto r = empirical_view_test(CodeParams::make(2, 1, 2), 0, 2000, 0.05);
        CHECK(r.pass);
        REQUIRE(r.pairs.size() == 1);
        CHECK(r.pairs[0].tv < 0.05);
    }
    SUBCASE("(3,2,2) passes") {
        auto r = empirical_view_test(CodeParams::make(3, 2, 2), 1, 2000, 0.05, 11);
        CHECK(r.pass);
    }
    SUBCASE("leak fixture fails") {
        auto r = empirical_view_test(CodeParams::make(3, 2, 2), 0, 2000, 0.05, 0, fixtures::leaky_plan);
        CHECK_FALSE(r.pass);
        CHECK(r.pairs[0].position_tv > 0.5);
    }
    SUBCASE("argument checks") {
        CHECK_THROWS_AS(empirical_view_test(CodeParams::make(2, 1, 2), 0, 50, 0.05), Error);
        CHECK_THROWS_AS(empirical_view_test(CodeParams::make(2, 1, 2), 2, 200, 0.05), Error);
    }
    SUBCASE("same seed, same result") {
        auto a = empirical_view_test(CodeParams::make(2, 1, 2), 1, 300, 0.05, 4);
        auto b = empirical_view_test(CodeParams::make(2, 1, 2), 1, 300, 0.05, 4);
        CHECK(a.pairs[0].tv == b.pairs[0].tv);
    }
}

TEST_CASE("visible rows are uniform per message") {
    for (auto [n, k, m] : {std::tuple{3u, 2u, 2u}, std::tuple{3u, 2u, 3u}, std::tuple{4u, 1u, 2u}}) {
        CodeParams p = CodeParams::make(n, k, m);
        for (std::uint32_t d = 0; d < m; ++d) {
            for (double pv : row_uniformity_pvalues(p, d, 0, 2000, 31 + d)) {
                CHECK(pv > 0.01);
            }
        }
    }
}
