// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "cpir/finite_field.hpp"
#include "cpir/rational.hpp"
#include "cpir/storage_code.hpp"

namespace cpir {

/// Set of 0-based message indices as a bitmask; bit m is message m.
using MessageSubset = std::uint32_t;

/// One summand x^[message] of a query; `row` is the storage row index, i.e.
/// already passed through the user's interleaver.
struct Term {
    std::uint32_t message = 0;
    std::uint32_t row = 0;

    friend bool operator==(const Term&, const Term&) = default;
};

/// Unit-coefficient sum of rows from distinct messages, sorted by message.
struct Equation {
    std::vector<Term> terms;

    MessageSubset subset() const noexcept;

    friend bool operator==(const Equation&, const Equation&) = default;
};

/// Location of an equation in the plan, after shuffling.
struct Slot {
    std::uint32_t db = 0;
    std::uint32_t position = 0;
};

/// Private bookkeeping for one query; never shown to a database.
struct EquationTag {
    std::uint32_t repetition = 0;
    std::uint32_t round = 0;     // 1-based; equals the number of terms
    std::uint32_t canonical = 0; // index in the unshuffled per-database order
};

/// K equations on K distinct databases asking for the same aligned sum.
struct SideInfoGroup {
    std::vector<Slot> members;
    MessageSubset subset = 0;
    std::uint32_t repetition = 0;
    std::uint32_t round = 0;
    /// Number of desired equations that cancel this sum.
    std::uint32_t uses = 0;
};

/// A query whose answer yields h_db^T x_row^[desired] once side
/// information (if any) is cancelled. `row` is the interleaved row index.
struct DesiredUse {
    Slot slot;
    std::uint32_t row = 0;
    std::optional<std::uint32_t> group;
};

/**
 * Query plan for one retrieval. `queries` is what the databases receive;
 * everything else is the user's private state.
 */
struct QueryPlan {
    CodeParams params;
    std::uint32_t desired = 0; // 0-based
    std::uint64_t seed = 0;
    std::uint32_t repetitions = 0;

    std::vector<std::vector<Equation>> queries; // [db][position]

    std::vector<std::vector<std::uint32_t>> interleavers; // [message][interleaved row] -> storage row
    std::vector<std::vector<EquationTag>> tags;           // [db][position]
    std::vector<SideInfoGroup> groups;
    std::vector<DesiredUse> desired_uses;

    std::size_t total_equations() const noexcept;
};

using AnswerSet = std::vector<std::vector<Symbol>>; // [db][position]

struct RetrievalResult {
    Matrix message;
    std::uint64_t downloaded_symbols = 0;
    std::uint64_t desired_symbols = 0;
    Rational achieved_rate;
    /// K x K solves spent on aligned side-information sums.
    std::uint64_t side_info_solves = 0;
    /// K x K solves spent on desired rows.
    std::uint64_t row_solves = 0;
};

/**
 * Builds the capacity-achieving plan for retrieving message `desired`
 * (0-based). Per repetition and round i, every database asks
 * K^{M-i}(N-K)^{i-1} sums for each i-subset of messages. Undesired sums are
 * placed on K circularly consecutive databases and decoded as aligned sums;
 * each is then cancelled at the N-K other databases in round i+1. The
 * whole schedule is repeated K times with the desired-row assignment shifted
 * by one database each time. Row orders are interleaved per message and
 * every database's query list is shuffled, all from `seed`.
 *
 * K = N degenerates to downloading every stored symbol (rate 1/M). Throws
 * UnsupportedParams if desired >= M.
 */
QueryPlan plan_queries(const CodeParams& params, std::uint32_t desired, std::uint64_t seed);

/// Evaluates every equation against one database's stored symbols.
/// Throws IndexOutOfRange for rows or messages the database does not hold.
std::vector<Symbol> answer_queries(const PrimeField& field, const DatabaseContents& contents,
                                   const std::vector<Equation>& equations);

/**
 * Recovers the desired message: decodes each used aligned sum from its K
 * answers, cancels it from the desired equations that carry it, solves each
 * desired row from its K projections and undoes the interleaver. Throws
 * InconsistentAnswers if the answers do not match the plan's shape.
 */
RetrievalResult reconstruct(const QueryPlan& plan, const AnswerSet& answers, const GeneratorMatrix& h);

/// Count of equations per exact message subset at database `db`, one map
/// per repetition.
std::vector<std::map<MessageSubset, std::size_t>> query_shape_census(const QueryPlan& plan, std::uint32_t db);

/// Row budget of the scheme: interleaved rows of each undesired message
/// that a plan consumes, K * N^(M-1).
std::uint64_t undesired_rows_per_message(const CodeParams& params);

} // namespace cpir
