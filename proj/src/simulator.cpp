// SPDX-License-Identifier: Apache-2.0

#include "cpir/simulator.hpp"

#include <future>

#include "cpir/error.hpp"
#include "cpir/random.hpp"

namespace cpir {

MessageSet generate_messages(const CodeParams& params, std::uint64_t seed) {
    params.validate();
    const std::size_t rows = params.rows_per_message();
    const std::uint32_t q = params.field.modulus();
    MessageSet out;
    for (std::uint32_t m = 0; m < params.M; ++m) {
        Rng rng(derive_seed(seed, Stream::Messages, m));
        std::vector<Symbol> entries(rows * params.K);
        for (Symbol& v : entries) {
            v = static_cast<Symbol>(rng.below(q));
        }
        out.emplace_back(rows, params.K, std::move(entries));
    }
    return out;
}

void DatabaseNode::fail() {
    failed_ = true;
    contents_.symbols.clear();
}

void DatabaseNode::restore(DatabaseContents contents) {
    contents_ = std::move(contents);
    failed_ = false;
}

std::vector<Symbol> DatabaseNode::answer(const PrimeField& field, const std::vector<Equation>& queries) const {
    if (failed_) {
        throw Error(ErrorCode::InvalidParams, "database " + std::to_string(index() + 1) + " is down");
    }
    return answer_queries(field, contents_, queries);
}

std::vector<std::uint32_t> repair_failed(std::vector<DatabaseNode>& nodes, const GeneratorMatrix& h) {
    std::vector<DatabaseContents> survivors;
    for (const DatabaseNode& node : nodes) {
        if (!node.failed() && survivors.size() < h.K()) {
            survivors.push_back(node.contents());
        }
    }
    std::vector<std::uint32_t> repaired;
    for (DatabaseNode& node : nodes) {
        if (!node.failed()) {
            continue;
        }
        if (survivors.size() < h.K()) {
            throw Error(ErrorCode::InvalidParams, "fewer than K healthy databases remain");
        }
        auto idx = static_cast<std::uint32_t>(node.index());
        node.restore(repair(survivors, h, idx));
        repaired.push_back(idx);
    }
    return repaired;
}

AnswerSet collect_answers(const std::vector<DatabaseNode>& nodes, const QueryPlan& plan) {
    std::vector<std::future<std::vector<Symbol>>> pending;
    pending.reserve(nodes.size());
    for (std::size_t n = 0; n < nodes.size(); ++n) {
        pending.push_back(std::async(std::launch::async, [&, n] {
            return nodes[n].answer(plan.params.field, plan.queries[n]);
        }));
    }
    // Joined in database order, so completion order never matters.
    AnswerSet answers;
    for (auto& f : pending) {
        answers.push_back(f.get());
    }
    return answers;
}

RetrievalReport run_retrieval(const SimConfig& cfg, const MessageSet& messages) {
    const auto start = std::chrono::steady_clock::now();
    const CodeParams& p = cfg.params;
    p.validate();
    if (cfg.failures.size() > p.N - p.K) {
        throw Error(ErrorCode::InvalidParams, "at most N-K databases may fail");
    }
    for (std::uint32_t f : cfg.failures) {
        if (f >= p.N) {
            throw Error(ErrorCode::IndexOutOfRange, "failed database index out of range");
        }
    }
    if (messages.size() != p.M) {
        throw Error(ErrorCode::DimensionMismatch, "expected M messages");
    }
    for (const Matrix& w : messages) {
        if (w.rows() != p.rows_per_message() || w.cols() != p.K) {
            throw Error(ErrorCode::DimensionMismatch, "each message must be N^M x K");
        }
    }

    GeneratorMatrix h = build_generator(p);
    std::vector<DatabaseNode> nodes;
    for (DatabaseContents& c : encode(messages, h)) {
        nodes.emplace_back(std::move(c));
    }
    for (std::uint32_t f : cfg.failures) {
        nodes[f].fail();
    }

    RetrievalReport report;
    report.params = p;
    report.desired = cfg.desired;
    report.repaired = repair_failed(nodes, h);

    QueryPlan plan = plan_queries(p, cfg.desired, cfg.seed);
    report.answers = collect_answers(nodes, plan);
    for (const auto& a : report.answers) {
        report.per_db_answers.push_back(a.size());
    }
    report.result = reconstruct(plan, report.answers, h);
    report.duration = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start);
    return report;
}

RetrievalReport run_retrieval(const SimConfig& cfg, std::uint64_t message_seed) {
    return run_retrieval(cfg, generate_messages(cfg.params, message_seed));
}

} // namespace cpir
