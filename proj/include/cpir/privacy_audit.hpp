// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "cpir/pir_scheme.hpp"

namespace cpir {

/// Produces the plan a database would receive; swapped out by test fixtures.
using Planner = std::function<QueryPlan(const CodeParams&, std::uint32_t desired, std::uint64_t seed)>;

/// Equations in one database's view; no desired index, no interleaver.
struct ViewSample {
    std::uint32_t db = 0;
    std::vector<Equation> equations;
};

ViewSample database_view(const QueryPlan& plan, std::uint32_t db);

struct ShapeViolation {
    std::uint32_t desired = 0; // 0-based
    std::uint32_t db = 0;      // 0-based
    std::uint32_t repetition = 0;
    std::string detail;
};

struct ShapeReport {
    bool pass = true;
    /// K^{M-i}(N-K)^{i-1} for each i-subset; absent subsets are never asked.
    std::map<MessageSubset, std::size_t> expected;
    std::vector<ShapeViolation> violations;
};

/// Per repetition, the census every database must show regardless of the
/// desired index.
std::map<MessageSubset, std::size_t> expected_census(const CodeParams& params);

/// Checks the census of every database and repetition of every plan.
ShapeReport check_shape_invariance(const CodeParams& params, std::span<const QueryPlan> plans);

/// Plans one retrieval per desired index from `seed` and checks them all.
ShapeReport exact_shape_invariance(const CodeParams& params, std::uint64_t seed = 0,
                                   const Planner& planner = plan_queries);

struct PairDistance {
    std::uint32_t d1 = 0; // 0-based
    std::uint32_t d2 = 0;
    std::uint32_t db = 0;
    double tv = 0;          // max of the two components below
    double position_tv = 0; // joint (position, message subset)
    double row_tv = 0;      // worst per-message row-index marginal
};

struct EmpiricalReport {
    std::uint32_t db = 0;
    std::uint32_t trials = 0;
    double threshold = 0;
    bool pass = true;
    std::vector<PairDistance> pairs;
};

/// Describes the coarsened view statistic used by empirical_view_test.
extern const char* const kViewStatistic;

/**
 * Samples `trials` plans per desired index and compares, for database `db`,
 * the empirical distributions of (a) the message subset at each query
 * position and (b) the row indices seen per message. Passes iff every
 * pairwise total-variation distance is below `threshold`. Throws
 * InvalidParams for trials < 100.
 */
EmpiricalReport empirical_view_test(const CodeParams& params, std::uint32_t db, std::uint32_t trials, double threshold,
                                    std::uint64_t seed = 0, const Planner& planner = plan_queries);

/**
 * Chi-square p-value per message that the rows `db` sees of that message are
 * uniform over all rows, for plans retrieving `desired`. Each view holds a
 * fixed-size subset, so the statistic is scaled by the finite-population
 * variance.
 */
std::vector<double> row_uniformity_pvalues(const CodeParams& params, std::uint32_t desired, std::uint32_t db,
                                           std::uint32_t trials, std::uint64_t seed = 0);

} // namespace cpir

namespace cpir::fixtures {

/// Negative control: a correct plan whose per-database order puts queries
/// touching the desired message first instead of shuffling them.
QueryPlan leaky_plan(const CodeParams& params, std::uint32_t desired, std::uint64_t seed);

/// Negative control: an unshuffled plan in which one query at database 1
/// loses a term, so its census differs from every other database.
QueryPlan perturbed_census_plan(const CodeParams& params, std::uint32_t desired, std::uint64_t seed);

} // namespace cpir::fixtures
