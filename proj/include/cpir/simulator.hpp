// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "cpir/pir_scheme.hpp"
#include "cpir/storage_code.hpp"

namespace cpir {

struct SimConfig {
    CodeParams params;
    std::uint32_t desired = 0; // 0-based
    std::uint64_t seed = 0;
    /// 0-based databases wiped and rebuilt before retrieval; at most N-K.
    std::set<std::uint32_t> failures;
};

struct RetrievalReport {
    CodeParams params;
    std::uint32_t desired = 0;
    RetrievalResult result;
    std::vector<std::uint64_t> per_db_answers;
    std::vector<std::uint32_t> repaired; // 0-based
    std::chrono::nanoseconds duration{0};
    /// Answers received, kept for byte-level comparison between runs.
    AnswerSet answers;
};

/// M uniform messages of N^M x K symbols, reproducible from `seed`.
MessageSet generate_messages(const CodeParams& params, std::uint64_t seed);

/// One storage node; answers queries against its own contents only.
class DatabaseNode {
public:
    explicit DatabaseNode(DatabaseContents contents) : contents_(std::move(contents)) {}

    std::size_t index() const noexcept { return contents_.index; }
    bool failed() const noexcept { return failed_; }
    const DatabaseContents& contents() const noexcept { return contents_; }

    /// Drops the stored symbols.
    void fail();
    void restore(DatabaseContents contents);

    /// Throws InvalidParams if the node has failed and not been restored.
    std::vector<Symbol> answer(const PrimeField& field, const std::vector<Equation>& queries) const;

private:
    DatabaseContents contents_;
    bool failed_ = false;
};

/**
 * Full retrieval: encode, optionally fail and repair nodes, plan, collect
 * answers from all nodes concurrently, reconstruct. The caller compares
 * report.result.message against the source.
 */
RetrievalReport run_retrieval(const SimConfig& cfg, const MessageSet& messages);
RetrievalReport run_retrieval(const SimConfig& cfg, std::uint64_t message_seed);

/// Repairs every failed node from the K lowest-indexed healthy nodes and
/// returns the repaired indices in ascending order.
std::vector<std::uint32_t> repair_failed(std::vector<DatabaseNode>& nodes, const GeneratorMatrix& h);

/// Answers the plan's queries on all nodes, one task per node.
AnswerSet collect_answers(const std::vector<DatabaseNode>& nodes, const QueryPlan& plan);

} // namespace cpir
