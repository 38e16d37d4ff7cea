// SPDX-License-Identifier: Apache-2.0

#include "cpir/pir_scheme.hpp"

#include <algorithm>
#include <bit>
#include <string>
#include <tuple>

#include "cpir/error.hpp"
#include "cpir/random.hpp"

namespace cpir {

namespace {

std::uint64_t upow(std::uint64_t base, std::uint32_t exp) {
    std::uint64_t r = 1;
    for (std::uint32_t i = 0; i < exp; ++i) {
        r *= base;
    }
    return r;
}

constexpr MessageSubset bit(std::uint32_t m) { return MessageSubset{1} << m; }

// An equation before shuffling, with the bookkeeping needed to place it.
struct Pending {
    std::uint32_t repetition;
    std::uint32_t round;
    MessageSubset subset;
    std::uint64_t ordinal;
    Equation equation; // canonical (interleaved) row indices
    std::int64_t group = -1;
    std::int64_t use = -1;

    auto key() const { return std::tie(repetition, round, subset, ordinal); }
};

Equation with_term(Equation eq, Term t) {
    auto at = std::lower_bound(eq.terms.begin(), eq.terms.end(), t,
                               [](const Term& a, const Term& b) { return a.message < b.message; });
    eq.terms.insert(at, t);
    return eq;
}

/**
 * Interleaved row of the desired message that repetition 0 assigns to slot
 * (round, subset index, ordinal) of database `db`. Round 1 hands database n
 * the block [n K^{M-1}, (n+1) K^{M-1}); later rounds continue the count
 * ordinal-major, then subset, then database.
 */
class DesiredLayout {
public:
    DesiredLayout(const CodeParams& p, const std::vector<std::vector<MessageSubset>>& subsets_by_size)
        : n_(p.N), first_round_(upow(p.K, p.M - 1)), offsets_(p.M + 2, 0), subset_counts_(p.M + 1, 0) {
        offsets_[2] = std::uint64_t{p.N} * first_round_;
        for (std::uint32_t r = 2; r <= p.M; ++r) {
            subset_counts_[r] = subsets_by_size[r - 1].size();
            std::uint64_t slots = upow(p.K, p.M - r) * upow(p.N - p.K, r - 1);
            offsets_[r + 1] = offsets_[r] + std::uint64_t{p.N} * subset_counts_[r] * slots;
        }
    }

    std::uint64_t first_round_per_db() const noexcept { return first_round_; }

    std::uint32_t row(std::uint32_t db, std::uint32_t round, std::size_t subset_index, std::uint64_t ordinal) const {
        if (round == 1) {
            return static_cast<std::uint32_t>(db * first_round_ + ordinal);
        }
        return static_cast<std::uint32_t>(offsets_[round] + (ordinal * subset_counts_[round] + subset_index) * n_ + db);
    }

private:
    std::uint64_t n_;
    std::uint64_t first_round_;
    std::vector<std::uint64_t> offsets_;
    std::vector<std::uint64_t> subset_counts_;
};

} // namespace

MessageSubset Equation::subset() const noexcept {
    MessageSubset s = 0;
    for (const Term& t : terms) {
        s |= bit(t.message);
    }
    return s;
}

std::size_t QueryPlan::total_equations() const noexcept {
    std::size_t total = 0;
    for (const auto& q : queries) {
        total += q.size();
    }
    return total;
}

std::uint64_t undesired_rows_per_message(const CodeParams& params) {
    return std::uint64_t{params.K} * upow(params.N, params.M - 1);
}

QueryPlan plan_queries(const CodeParams& params, std::uint32_t desired, std::uint64_t seed) {
    params.validate();
    if (desired >= params.M) {
        throw Error(ErrorCode::UnsupportedParams, "desired message index out of range");
    }
    const std::uint32_t N = params.N;
    const std::uint32_t K = params.K;
    const std::uint32_t M = params.M;
    const std::size_t rows = params.rows_per_message();

    QueryPlan plan;
    plan.params = params;
    plan.desired = desired;
    plan.seed = seed;
    plan.repetitions = K;
    for (std::uint32_t m = 0; m < M; ++m) {
        Rng rng(derive_seed(seed, Stream::Interleaver, m));
        plan.interleavers.push_back(rng.permutation(static_cast<std::uint32_t>(rows)));
    }

    // Subsets of undesired messages by size, ascending bitmask (colex) order.
    std::vector<std::vector<MessageSubset>> subsets_by_size(M);
    for (MessageSubset s = 1; s < bit(M); ++s) {
        if ((s & bit(desired)) == 0) {
            subsets_by_size[static_cast<std::size_t>(std::popcount(s))].push_back(s);
        }
    }
    const DesiredLayout layout(params, subsets_by_size);

    std::vector<std::vector<Pending>> pending(N);
    std::vector<std::uint32_t> next_row(M, 0);

    for (std::uint32_t rep = 0; rep < K; ++rep) {
        // Repetition rep moves the desired rows of database n - rep to n.
        auto source = [&](std::uint32_t n) { return (n + N - rep) % N; };

        for (std::uint32_t n = 0; n < N; ++n) {
            for (std::uint64_t k = 0; k < layout.first_round_per_db(); ++k) {
                std::uint32_t row = layout.row(source(n), 1, 0, k);
                auto use = static_cast<std::int64_t>(plan.desired_uses.size());
                plan.desired_uses.push_back({{}, row, std::nullopt});
                pending[n].push_back({rep, 1, bit(desired), k, Equation{{{desired, row}}}, -1, use});
            }
        }

        for (std::uint32_t i = 1; i < M; ++i) {
            const std::uint64_t group_count = std::uint64_t{N} * upow(K, M - i - 1) * upow(N - K, i - 1);
            const auto& subsets = subsets_by_size[i];
            for (std::size_t sigma = 0; sigma < subsets.size(); ++sigma) {
                const MessageSubset s = subsets[sigma];
                std::vector<std::uint64_t> member_ordinal(N, 0);
                std::vector<std::uint64_t> use_ordinal(N, 0);
                for (std::uint64_t g = 0; g < group_count; ++g) {
                    Equation aligned;
                    for (std::uint32_t m = 0; m < M; ++m) {
                        if (s & bit(m)) {
                            aligned.terms.push_back({m, next_row[m]++});
                        }
                    }
                    auto gid = static_cast<std::uint32_t>(plan.groups.size());
                    plan.groups.push_back({{}, s, rep, i, 0});
                    const auto start = static_cast<std::uint32_t>((g * K) % N);
                    for (std::uint32_t t = 0; t < K; ++t) {
                        std::uint32_t n = (start + t) % N;
                        pending[n].push_back({rep, i, s, member_ordinal[n]++, aligned, gid, -1});
                    }
                    // Databases outside the window cancel the decoded sum next round.
                    for (std::uint32_t t = 0; t < N - K; ++t) {
                        std::uint32_t n = (start + K + t) % N;
                        std::uint64_t k = use_ordinal[n]++;
                        std::uint32_t row = layout.row(source(n), i + 1, sigma, k);
                        auto use = static_cast<std::int64_t>(plan.desired_uses.size());
                        plan.desired_uses.push_back({{}, row, gid});
                        ++plan.groups[gid].uses;
                        pending[n].push_back(
                            {rep, i + 1, s | bit(desired), k, with_term(aligned, {desired, row}), -1, use});
                    }
                }
            }
        }
    }

    for (std::uint32_t m = 0; m < M; ++m) {
        if (next_row[m] > rows) {
            throw Error(ErrorCode::UnsupportedParams,
                        "row budget exceeded for message " + std::to_string(m + 1));
        }
    }

    plan.queries.resize(N);
    plan.tags.resize(N);
    for (std::uint32_t n = 0; n < N; ++n) {
        auto& list = pending[n];
        std::stable_sort(list.begin(), list.end(), [](const Pending& a, const Pending& b) { return a.key() < b.key(); });
        Rng rng(derive_seed(seed, Stream::QueryShuffle, n));
        std::vector<std::uint32_t> order = rng.permutation(static_cast<std::uint32_t>(list.size()));
        plan.queries[n].resize(list.size());
        plan.tags[n].resize(list.size());
        for (std::uint32_t pos = 0; pos < order.size(); ++pos) {
            Pending& e = list[order[pos]];
            Equation eq = e.equation;
            for (Term& t : eq.terms) {
                t.row = plan.interleavers[t.message][t.row];
            }
            plan.queries[n][pos] = std::move(eq);
            plan.tags[n][pos] = {e.repetition, e.round, order[pos]};
            if (e.group >= 0) {
                plan.groups[static_cast<std::size_t>(e.group)].members.push_back({n, pos});
            }
            if (e.use >= 0) {
                plan.desired_uses[static_cast<std::size_t>(e.use)].slot = {n, pos};
            }
        }
    }
    return plan;
}

std::vector<Symbol> answer_queries(const PrimeField& field, const DatabaseContents& contents,
                                   const std::vector<Equation>& equations) {
    const std::size_t messages = contents.message_count();
    std::vector<Symbol> out;
    out.reserve(equations.size());
    for (const Equation& eq : equations) {
        Symbol acc = 0;
        for (const Term& t : eq.terms) {
            if (t.message >= messages || t.row >= contents.rows_per_message) {
                throw Error(ErrorCode::IndexOutOfRange, "query references a row the database does not store");
            }
            acc = field.add(acc, contents.at(t.message, t.row));
        }
        out.push_back(acc);
    }
    return out;
}

RetrievalResult reconstruct(const QueryPlan& plan, const AnswerSet& answers, const GeneratorMatrix& h) {
    const CodeParams& p = plan.params;
    if (h.N() != p.N || h.K() != p.K || !(h.field() == p.field)) {
        throw Error(ErrorCode::DimensionMismatch, "generator does not match the plan parameters");
    }
    if (answers.size() != plan.queries.size()) {
        throw Error(ErrorCode::InconsistentAnswers, "answer set has the wrong number of databases");
    }
    for (std::size_t n = 0; n < answers.size(); ++n) {
        if (answers[n].size() != plan.queries[n].size()) {
            throw Error(ErrorCode::InconsistentAnswers,
                        "database " + std::to_string(n + 1) + " returned the wrong number of answers");
        }
    }
    const PrimeField& f = p.field;
    const std::size_t rows = p.rows_per_message();
    std::vector<std::vector<Symbol>> columns;
    for (std::size_t n = 0; n < p.N; ++n) {
        columns.push_back(h.column(n));
    }

    RetrievalResult result;
    std::map<std::vector<std::size_t>, SubsetDecoder> decoders;
    auto decode = [&](std::vector<std::pair<std::size_t, Symbol>> projections) {
        std::sort(projections.begin(), projections.end());
        std::vector<std::size_t> dbs;
        std::vector<Symbol> values;
        for (const auto& [db, v] : projections) {
            if (!dbs.empty() && dbs.back() == db) {
                throw Error(ErrorCode::InconsistentAnswers, "two projections from the same database");
            }
            dbs.push_back(db);
            values.push_back(v);
        }
        auto it = decoders.find(dbs);
        if (it == decoders.end()) {
            it = decoders.emplace(dbs, SubsetDecoder(h, dbs)).first;
        }
        return it->second.decode(values);
    };

    // Aligned sums: only the sum row is recovered, never its summands.
    std::vector<std::vector<Symbol>> sums(plan.groups.size());
    for (std::size_t g = 0; g < plan.groups.size(); ++g) {
        const SideInfoGroup& group = plan.groups[g];
        if (group.uses == 0) {
            continue;
        }
        std::vector<std::pair<std::size_t, Symbol>> projections;
        for (const Slot& s : group.members) {
            projections.emplace_back(s.db, answers[s.db][s.position]);
        }
        sums[g] = decode(std::move(projections));
        ++result.side_info_solves;
    }

    std::vector<std::vector<std::pair<std::size_t, Symbol>>> per_row(rows);
    for (const DesiredUse& use : plan.desired_uses) {
        Symbol value = answers[use.slot.db][use.slot.position];
        if (use.group) {
            value = f.sub(value, f.dot(columns[use.slot.db], sums[*use.group]));
        }
        per_row[use.row].emplace_back(use.slot.db, value);
    }

    const std::vector<std::uint32_t>& interleaver = plan.interleavers[plan.desired];
    result.message = Matrix(rows, p.K);
    for (std::size_t r = 0; r < rows; ++r) {
        if (per_row[r].size() != p.K) {
            throw Error(ErrorCode::InconsistentAnswers, "desired row is not covered by exactly K databases");
        }
        std::vector<Symbol> x = decode(std::move(per_row[r]));
        std::copy(x.begin(), x.end(), result.message.row(interleaver[r]).begin());
        ++result.row_solves;
    }

    result.downloaded_symbols = plan.total_equations();
    result.desired_symbols = std::uint64_t{p.K} * rows;
    result.achieved_rate = Rational(BigInt(result.desired_symbols), BigInt(result.downloaded_symbols));
    return result;
}

std::vector<std::map<MessageSubset, std::size_t>> query_shape_census(const QueryPlan& plan, std::uint32_t db) {
    std::vector<std::map<MessageSubset, std::size_t>> census(plan.repetitions);
    if (db >= plan.queries.size()) {
        return census;
    }
    for (std::size_t pos = 0; pos < plan.queries[db].size(); ++pos) {
        std::uint32_t rep = plan.tags[db][pos].repetition;
        if (rep >= census.size()) {
            census.resize(rep + 1);
        }
        ++census[rep][plan.queries[db][pos].subset()];
    }
    return census;
}

} // namespace cpir
