// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <sstream>

#include "cpir/analysis.hpp"
#include "cpir/error.hpp"
#include "cpir/pir_scheme.hpp"

using namespace cpir;

namespace {

// (1 + R + R^2 + ... + R^{M-1})^{-1}, summed term by term.
Rational geometric_capacity(std::uint32_t n, std::uint32_t k, std::uint32_t m) {
    Rational rc(k, n), sum(0), power(1);
    for (std::uint32_t i = 0; i < m; ++i) {
        sum = sum + power;
        power = power * rc;
    }
    return Rational(1) / sum;
}

} // namespace

TEST_CASE("rational basics") {
    Rational a(6, 8);
    CHECK(a.num() == 3);
    CHECK(a.den() == 4);
    CHECK(Rational(3, -6) == Rational(-1, 2));
    CHECK(a.fraction() == "3/4");
    CHECK(Rational(4, 2).str() == "2");
    CHECK(Rational(4, 2).fraction() == "2/1");
    CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
    CHECK(Rational(1, 3) - Rational(1, 2) == Rational(-1, 6));
    CHECK(Rational(2, 3) * Rational(3, 4) == Rational(1, 2));
    CHECK(Rational(2, 3) / Rational(4, 3) == Rational(1, 2));
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(-1, 3) < Rational(0));
    CHECK(Rational(5, 8).decimal(3) == "0.625");
    CHECK(Rational(2, 3).decimal(4) == "0.6667");
    CHECK(Rational(9, 19).decimal(6) == "0.473684");
    CHECK(Rational(1).decimal(2) == "1.00");
    CHECK_THROWS_AS(Rational(1, 0), Error);
    CHECK_THROWS_AS(Rational(1) / Rational(0), Error);
    CHECK(binomial(5, 2) == 10);
    CHECK(binomial(2, 5) == 0);
}

TEST_CASE("capacity") {
    CHECK(capacity(5, 3, 2) == Rational(5, 8));
    CHECK(capacity(3, 2, 3) == Rational(9, 19));
    for (std::uint32_t n = 1; n <= 6; ++n) {
        for (std::uint32_t m = 1; m <= 6; ++m) {
            CHECK(capacity(n, n, m) == Rational(1, m));
        }
    }
    CHECK(capacity(2, 1, 2) == Rational(2, 3));
    CHECK_THROWS_AS(capacity(3, 4, 2), Error);
    CHECK_THROWS_AS(capacity(3, 0, 2), Error);
    CHECK_THROWS_AS(capacity(3, 2, 0), Error);
}

TEST_CASE("closed form matches the geometric series") {
    for (std::uint32_t n = 1; n <= 9; ++n) {
        for (std::uint32_t k = 1; k <= n; ++k) {
            for (std::uint32_t m = 1; m <= 8; ++m) {
                REQUIRE(capacity(n, k, m) == geometric_capacity(n, k, m));
                if (k < n) {
                    Rational rc(k, n);
                    Rational power(1);
                    for (std::uint32_t i = 0; i < m; ++i) {
                        power = power * rc;
                    }
                    REQUIRE(capacity(n, k, m) == (Rational(1) - rc) / (Rational(1) - power));
                }
            }
        }
    }
}

TEST_CASE("scheme_counts") {
    auto c = scheme_counts(5, 3, 2);
    CHECK(c.desired_total == 75);
    CHECK(c.undesired_total == 45);
    CHECK(c.rate() == Rational(5, 8));
    REQUIRE(c.per_round.size() == 2);
    CHECK(c.per_round[0].desired == 45);
    CHECK(c.per_round[0].undesired == 45);
    CHECK(c.per_round[1].desired == 30);
    CHECK(c.per_round[1].undesired == 0);

    auto d = scheme_counts(3, 2, 3);
    CHECK(d.desired_total == 54);
    CHECK(d.undesired_total == 60);

    CHECK_THROWS_AS(scheme_counts(3, 3, 2), Error);

    SUBCASE("K=1 reduces to the repetition-coded capacity") {
        for (std::uint32_t n = 2; n <= 7; ++n) {
            for (std::uint32_t m = 1; m <= 5; ++m) {
                Rational sum(0), power(1);
                for (std::uint32_t i = 0; i < m; ++i) {
                    sum = sum + power;
                    power = power * Rational(1, n);
                }
                REQUIRE(scheme_counts(n, 1, m).rate() == Rational(1) / sum);
            }
        }
    }

    SUBCASE("closed forms agree with enumerated plans") {
        for (std::uint32_t n = 2; n <= 6; ++n) {
            for (std::uint32_t k = 1; k < n; ++k) {
                for (std::uint32_t m = 1; m <= 4; ++m) {
                    auto counts = scheme_counts(n, k, m);
                    REQUIRE(counts.desired_total == ipow(n, m) * k);
                    REQUIRE(counts.rate() == capacity(n, k, m));
                    QueryPlan plan = plan_queries(CodeParams::make(n, k, m), 0, 3);
                    std::vector<BigInt> desired(m + 1), undesired(m + 1);
                    for (std::uint32_t db = 0; db < n; ++db) {
                        for (std::size_t pos = 0; pos < plan.queries[db].size(); ++pos) {
                            const auto& eq = plan.queries[db][pos];
                            std::uint32_t round = plan.tags[db][pos].round;
                            REQUIRE(round == eq.terms.size());
                            if (eq.subset() & 1u) {
                                desired[round] += 1;
                            } else {
                                undesired[round] += 1;
                            }
                        }
                    }
                    for (const auto& rc : counts.per_round) {
                        REQUIRE(desired[rc.round] == rc.desired);
                        REQUIRE(undesired[rc.round] == rc.undesired);
                    }
                }
            }
        }
    }
}

TEST_CASE("baseline rate") {
    CHECK(baseline_rate(3, 5) == Rational(2, 5));
    CHECK(baseline_rate(1, 2) == Rational(1, 2));
    CHECK(capacity(5, 3, 2) > baseline_rate(3, 5));
    for (std::uint32_t n = 2; n <= 8; ++n) {
        for (std::uint32_t k = 1; k < n; ++k) {
            for (std::uint32_t m = 1; m <= 6; ++m) {
                REQUIRE(capacity(n, k, m) > baseline_rate(k, n));
                REQUIRE(capacity(n, k, m) <= Rational(1));
            }
        }
    }
}

TEST_CASE("capacity curve") {
    auto curve = capacity_curve({1, 2, 3, 5, 10}, 10, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
    REQUIRE(curve.size() == 50);
    for (const auto& p : curve) {
        if (p.M == 1) {
            CHECK(p.capacity == Rational(1));
        }
        if (p.code_rate == Rational(1)) {
            CHECK(p.capacity == Rational(1, p.M));
        }
    }
    SUBCASE("decreasing in M toward 1 - R_c") {
        for (std::uint32_t k = 1; k < 10; ++k) {
            Rational prev(2);
            for (std::uint32_t m = 1; m <= 30; ++m) {
                Rational c = capacity(10, k, m);
                REQUIRE(c < prev);
                REQUIRE(c > baseline_rate(k, 10));
                prev = c;
            }
            // Within 1e-6 of the limit by M = 30 for R_c <= 0.6.
            if (k <= 6) {
                REQUIRE((prev - baseline_rate(k, 10)).to_double() < 1e-6);
            }
        }
    }
    SUBCASE("decreasing in K for M >= 2") {
        for (std::uint32_t m = 2; m <= 6; ++m) {
            for (std::uint32_t k = 1; k < 10; ++k) {
                REQUIRE(capacity(10, k + 1, m) < capacity(10, k, m));
            }
        }
    }
    SUBCASE("CSV output") {
        std::ostringstream out;
        write_capacity_csv(out, capacity_curve({2}, 5, {3}));
        CHECK(out.str() == "Rc_num,Rc_den,M,C_num,C_den,C_decimal\n3,5,2,5,8,0.625000\n");
    }
}
