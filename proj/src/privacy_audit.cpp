// SPDX-License-Identifier: Apache-2.0

#include "cpir/privacy_audit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <future>
#include <numeric>
#include <sstream>
#include <thread>
#include <unordered_map>

#include <boost/math/distributions/chi_squared.hpp>

#include "cpir/error.hpp"
#include "cpir/random.hpp"

namespace cpir {

const char* const kViewStatistic =
    "coarsened view: joint distribution of (query position, message subset) and per-message "
    "row-index marginals; the full joint view is not compared";

ViewSample database_view(const QueryPlan& plan, std::uint32_t db) {
    return {db, plan.queries.at(db)};
}

std::map<MessageSubset, std::size_t> expected_census(const CodeParams& params) {
    std::map<MessageSubset, std::size_t> out;
    for (MessageSubset s = 1; s < (MessageSubset{1} << params.M); ++s) {
        const auto i = static_cast<std::uint32_t>(std::popcount(s));
        std::size_t count = 1;
        for (std::uint32_t e = 0; e < params.M - i; ++e) {
            count *= params.K;
        }
        for (std::uint32_t e = 0; e + 1 < i; ++e) {
            count *= params.N - params.K;
        }
        if (count > 0) {
            out[s] = count;
        }
    }
    return out;
}

namespace {

std::string describe(const std::map<MessageSubset, std::size_t>& census) {
    std::ostringstream out;
    out << '{';
    bool first = true;
    for (const auto& [s, c] : census) {
        out << (first ? "" : ", ") << '{';
        bool inner = true;
        for (std::uint32_t m = 0; m < 32; ++m) {
            if (s & (MessageSubset{1} << m)) {
                out << (inner ? "" : ",") << m + 1;
                inner = false;
            }
        }
        out << "}:" << c;
        first = false;
    }
    out << '}';
    return out.str();
}

} // namespace

ShapeReport check_shape_invariance(const CodeParams& params, std::span<const QueryPlan> plans) {
    ShapeReport report;
    report.expected = expected_census(params);
    for (const QueryPlan& plan : plans) {
        if (plan.repetitions != params.K) {
            report.violations.push_back({plan.desired, 0, 0, "plan has " + std::to_string(plan.repetitions) +
                                                                 " repetitions, expected K"});
        }
        for (std::uint32_t db = 0; db < plan.queries.size(); ++db) {
            auto census = query_shape_census(plan, db);
            for (std::uint32_t rep = 0; rep < census.size(); ++rep) {
                if (census[rep] != report.expected) {
                    report.violations.push_back({plan.desired, db, rep,
                                                 "census " + describe(census[rep]) + " != " + describe(report.expected)});
                }
            }
        }
    }
    report.pass = report.violations.empty();
    return report;
}

ShapeReport exact_shape_invariance(const CodeParams& params, std::uint64_t seed, const Planner& planner) {
    std::vector<QueryPlan> plans;
    for (std::uint32_t d = 0; d < params.M; ++d) {
        plans.push_back(planner(params, d, seed));
    }
    return check_shape_invariance(params, plans);
}

namespace {

// Counts accumulated over trials for one desired index; merging is a sum.
struct Tally {
    std::unordered_map<std::uint64_t, std::uint64_t> positions; // (position << 32 | subset) -> count
    std::vector<std::vector<std::uint64_t>> rows;               // [message][row] -> count

    void merge(const Tally& other) {
        for (const auto& [k, v] : other.positions) {
            positions[k] += v;
        }
        for (std::size_t m = 0; m < rows.size(); ++m) {
            for (std::size_t r = 0; r < rows[m].size(); ++r) {
                rows[m][r] += other.rows[m][r];
            }
        }
    }
};

std::uint64_t trial_seed(std::uint64_t root, std::uint32_t desired, std::uint32_t trial) {
    return derive_seed(root, Stream::AuditTrial, (std::uint64_t{desired} << 32) | trial);
}

Tally sample_views(const CodeParams& params, std::uint32_t desired, std::uint32_t db, std::uint32_t trials,
                   std::uint64_t seed, const Planner& planner) {
    const std::size_t rows = params.rows_per_message();
    const unsigned workers = std::max(1u, std::min(std::thread::hardware_concurrency(), 16u));
    std::vector<std::future<Tally>> parts;
    for (unsigned w = 0; w < workers; ++w) {
        parts.push_back(std::async(std::launch::async, [&, w] {
            Tally t;
            t.rows.assign(params.M, std::vector<std::uint64_t>(rows, 0));
            for (std::uint32_t trial = w; trial < trials; trial += workers) {
                QueryPlan plan = planner(params, desired, trial_seed(seed, desired, trial));
                const auto& view = plan.queries.at(db);
                for (std::size_t pos = 0; pos < view.size(); ++pos) {
                    ++t.positions[(std::uint64_t{pos} << 32) | view[pos].subset()];
                    for (const Term& term : view[pos].terms) {
                        ++t.rows[term.message][term.row];
                    }
                }
            }
            return t;
        }));
    }
    Tally total;
    total.rows.assign(params.M, std::vector<std::uint64_t>(rows, 0));
    for (auto& p : parts) {
        total.merge(p.get());
    }
    return total;
}

template <typename Map>
double tv_distance(const Map& a, const Map& b) {
    double na = 0, nb = 0;
    for (const auto& [k, v] : a) {
        na += static_cast<double>(v);
    }
    for (const auto& [k, v] : b) {
        nb += static_cast<double>(v);
    }
    if (na == 0 || nb == 0) {
        return na == nb ? 0.0 : 1.0;
    }
    double sum = 0;
    for (const auto& [k, v] : a) {
        auto it = b.find(k);
        double pb = it == b.end() ? 0.0 : static_cast<double>(it->second) / nb;
        sum += std::abs(static_cast<double>(v) / na - pb);
    }
    for (const auto& [k, v] : b) {
        if (a.find(k) == a.end()) {
            sum += static_cast<double>(v) / nb;
        }
    }
    return sum / 2;
}

double tv_distance(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
    std::map<std::size_t, std::uint64_t> ma, mb;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i]) {
            ma[i] = a[i];
        }
        if (b[i]) {
            mb[i] = b[i];
        }
    }
    return tv_distance(ma, mb);
}

} // namespace

EmpiricalReport empirical_view_test(const CodeParams& params, std::uint32_t db, std::uint32_t trials, double threshold,
                                    std::uint64_t seed, const Planner& planner) {
    params.validate();
    if (trials < 100) {
        throw Error(ErrorCode::InvalidParams, "empirical view test needs at least 100 trials");
    }
    if (db >= params.N) {
        throw Error(ErrorCode::IndexOutOfRange, "database index out of range");
    }
    std::vector<Tally> tallies;
    for (std::uint32_t d = 0; d < params.M; ++d) {
        tallies.push_back(sample_views(params, d, db, trials, seed, planner));
    }
    EmpiricalReport report{db, trials, threshold, true, {}};
    for (std::uint32_t d1 = 0; d1 < params.M; ++d1) {
        for (std::uint32_t d2 = d1 + 1; d2 < params.M; ++d2) {
            PairDistance pd{d1, d2, db, 0, 0, 0};
            pd.position_tv = tv_distance(tallies[d1].positions, tallies[d2].positions);
            for (std::uint32_t m = 0; m < params.M; ++m) {
                pd.row_tv = std::max(pd.row_tv, tv_distance(tallies[d1].rows[m], tallies[d2].rows[m]));
            }
            pd.tv = std::max(pd.position_tv, pd.row_tv);
            report.pass = report.pass && pd.tv < threshold;
            report.pairs.push_back(pd);
        }
    }
    return report;
}

std::vector<double> row_uniformity_pvalues(const CodeParams& params, std::uint32_t desired, std::uint32_t db,
                                           std::uint32_t trials, std::uint64_t seed) {
    params.validate();
    if (trials < 1 || db >= params.N || desired >= params.M) {
        throw Error(ErrorCode::InvalidParams, "bad uniformity test arguments");
    }
    Tally t = sample_views(params, desired, db, trials, seed, plan_queries);
    const double rows = static_cast<double>(params.rows_per_message());
    std::vector<double> out;
    for (const auto& counts : t.rows) {
        double total = 0;
        for (auto c : counts) {
            total += static_cast<double>(c);
        }
        const double per_trial = total / trials;
        const double p = per_trial / rows;
        if (p >= 1.0 || p <= 0.0 || rows < 2) {
            // Every row (or none) is seen in every trial.
            out.push_back(1.0);
            continue;
        }
        const double expected = total / rows;
        double stat = 0;
        for (auto c : counts) {
            double d = static_cast<double>(c) - expected;
            stat += d * d;
        }
        // Fixed-size subsets: Var(count) = T p (1-p), pairwise covariance
        // -T p (1-p) / (R-1).
        stat *= (rows - 1) / (trials * p * (1 - p) * rows);
        boost::math::chi_squared dist(rows - 1);
        out.push_back(boost::math::cdf(boost::math::complement(dist, stat)));
    }
    return out;
}

} // namespace cpir

namespace cpir::fixtures {

namespace {

// Reorders one database's queries, keeping tags and schedule slots in step.
void reorder(QueryPlan& plan, std::uint32_t db, const std::vector<std::uint32_t>& order) {
    std::vector<Equation> queries;
    std::vector<EquationTag> tags;
    std::vector<std::uint32_t> new_position(order.size());
    for (std::uint32_t pos = 0; pos < order.size(); ++pos) {
        queries.push_back(plan.queries[db][order[pos]]);
        tags.push_back(plan.tags[db][order[pos]]);
        new_position[order[pos]] = pos;
    }
    plan.queries[db] = std::move(queries);
    plan.tags[db] = std::move(tags);
    for (auto& g : plan.groups) {
        for (auto& s : g.members) {
            if (s.db == db) {
                s.position = new_position[s.position];
            }
        }
    }
    for (auto& u : plan.desired_uses) {
        if (u.slot.db == db) {
            u.slot.position = new_position[u.slot.position];
        }
    }
}

} // namespace

QueryPlan leaky_plan(const CodeParams& params, std::uint32_t desired, std::uint64_t seed) {
    QueryPlan plan = plan_queries(params, desired, seed);
    const MessageSubset mark = MessageSubset{1} << desired;
    for (std::uint32_t db = 0; db < plan.queries.size(); ++db) {
        std::vector<std::uint32_t> order(plan.queries[db].size());
        std::iota(order.begin(), order.end(), 0u);
        std::stable_partition(order.begin(), order.end(),
                              [&](std::uint32_t p) { return (plan.queries[db][p].subset() & mark) != 0; });
        reorder(plan, db, order);
    }
    return plan;
}

QueryPlan perturbed_census_plan(const CodeParams& params, std::uint32_t desired, std::uint64_t seed) {
    QueryPlan plan = plan_queries(params, desired, seed);
    for (std::uint32_t db = 0; db < plan.queries.size(); ++db) {
        std::vector<std::uint32_t> order(plan.queries[db].size());
        for (std::uint32_t pos = 0; pos < order.size(); ++pos) {
            order[plan.tags[db][pos].canonical] = pos;
        }
        reorder(plan, db, order);
    }
    for (Equation& eq : plan.queries[0]) {
        if (eq.terms.size() > 1) {
            eq.terms.pop_back();
            break;
        }
    }
    if (params.M == 1 && !plan.queries[0].empty()) {
        plan.queries[0].pop_back();
        plan.tags[0].pop_back();
    }
    return plan;
}

} // namespace cpir::fixtures
