// SPDX-License-Identifier: Apache-2.0

#include "cpir/storage_code.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "cpir/error.hpp"

namespace cpir {

CodeParams CodeParams::make(std::uint32_t n, std::uint32_t k, std::uint32_t m, std::uint32_t q) {
    CodeParams p{n, k, m, PrimeField(q)};
    p.validate();
    return p;
}

void CodeParams::validate() const {
    if (K < 1 || K > N) {
        throw Error(ErrorCode::InvalidParams, "need 1 <= K <= N");
    }
    if (M < 1 || M > kMaxMessages) {
        throw Error(ErrorCode::InvalidParams, "need 1 <= M <= " + std::to_string(kMaxMessages));
    }
    if (field.modulus() <= N) {
        throw Error(ErrorCode::FieldTooSmall, "need q > N for N distinct evaluation points");
    }
    std::uint64_t rows = 1;
    for (std::uint32_t i = 0; i < M; ++i) {
        rows *= N;
        if (rows > kMaxRowsPerMessage) {
            throw Error(ErrorCode::InvalidParams, "N^M exceeds the supported message length");
        }
    }
}

std::size_t CodeParams::rows_per_message() const {
    std::size_t rows = 1;
    for (std::uint32_t i = 0; i < M; ++i) {
        rows *= N;
    }
    return rows;
}

GeneratorMatrix GeneratorMatrix::from_matrix(const PrimeField& field, Matrix h) {
    if (h.rows() < 1 || h.rows() > h.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "generator must be K x N with 1 <= K <= N");
    }
    for (Symbol v : h.entries()) {
        if (!field.contains(v)) {
            throw Error(ErrorCode::InvalidParams, "generator entry outside the field");
        }
    }
    if (!verify_mds(field, h)) {
        throw Error(ErrorCode::InvalidParams, "generator is not MDS");
    }
    return GeneratorMatrix(field, std::move(h));
}

Matrix GeneratorMatrix::columns(std::span<const std::size_t> dbs) const {
    Matrix out(K(), dbs.size());
    for (std::size_t c = 0; c < dbs.size(); ++c) {
        for (std::size_t r = 0; r < K(); ++r) {
            out(r, c) = h_(r, dbs[c]);
        }
    }
    return out;
}

GeneratorMatrix build_generator(const CodeParams& params, std::optional<std::vector<Symbol>> points) {
    const PrimeField& f = params.field;
    if (f.modulus() <= params.N) {
        throw Error(ErrorCode::FieldTooSmall, "need q > N for N distinct evaluation points");
    }
    params.validate();
    std::vector<Symbol> a;
    if (points) {
        a = std::move(*points);
        if (a.size() != params.N) {
            throw Error(ErrorCode::InvalidParams, "need exactly N evaluation points");
        }
        for (Symbol p : a) {
            if (p == 0 || !f.contains(p)) {
                throw Error(ErrorCode::InvalidParams, "evaluation points must lie in [1, q)");
            }
        }
        if (std::set<Symbol>(a.begin(), a.end()).size() != a.size()) {
            throw Error(ErrorCode::DuplicatePoints, "evaluation points must be distinct");
        }
    } else {
        for (std::uint32_t n = 1; n <= params.N; ++n) {
            a.push_back(n);
        }
    }
    Matrix h(params.K, params.N);
    for (std::size_t n = 0; n < params.N; ++n) {
        Symbol power = 1;
        for (std::size_t k = 0; k < params.K; ++k) {
            h(k, n) = power;
            power = f.mul(power, a[n]);
        }
    }
    return GeneratorMatrix(f, std::move(h));
}

bool verify_mds(const PrimeField& field, const Matrix& h) {
    const std::size_t k = h.rows();
    const std::size_t n = h.cols();
    if (k == 0 || k > n) {
        return false;
    }
    // C(n, k) with early exit once past the limit.
    constexpr double kLimit = 1e5;
    double combos = 1;
    for (std::size_t i = 0; i < k; ++i) {
        combos = combos * static_cast<double>(n - i) / static_cast<double>(i + 1);
    }
    if (combos > kLimit) {
        throw Error(ErrorCode::TooLargeToVerify, "too many column subsets to check exhaustively");
    }
    std::vector<std::size_t> pick(k);
    for (std::size_t i = 0; i < k; ++i) {
        pick[i] = i;
    }
    while (true) {
        Matrix sub(k, k);
        for (std::size_t c = 0; c < k; ++c) {
            for (std::size_t r = 0; r < k; ++r) {
                sub(r, c) = h(r, pick[c]);
            }
        }
        if (rank(field, sub) < k) {
            return false;
        }
        // Next k-combination in lexicographic order.
        std::size_t i = k;
        while (i > 0 && pick[i - 1] == n - k + (i - 1)) {
            --i;
        }
        if (i == 0) {
            return true;
        }
        ++pick[i - 1];
        for (std::size_t j = i; j < k; ++j) {
            pick[j] = pick[j - 1] + 1;
        }
    }
}

std::vector<DatabaseContents> encode(const MessageSet& messages, const GeneratorMatrix& h) {
    if (messages.empty()) {
        throw Error(ErrorCode::DimensionMismatch, "no messages to encode");
    }
    const std::size_t rows = messages.front().rows();
    for (const Matrix& w : messages) {
        if (w.rows() != rows || w.cols() != h.K()) {
            throw Error(ErrorCode::DimensionMismatch, "every message must be rows x K");
        }
    }
    const PrimeField& f = h.field();
    std::vector<DatabaseContents> out(h.N());
    for (std::size_t n = 0; n < h.N(); ++n) {
        std::vector<Symbol> col = h.column(n);
        DatabaseContents& db = out[n];
        db.index = n;
        db.rows_per_message = rows;
        db.symbols.reserve(messages.size() * rows);
        for (const Matrix& w : messages) {
            for (std::size_t j = 0; j < rows; ++j) {
                db.symbols.push_back(f.dot(col, w.row(j)));
            }
        }
    }
    return out;
}

SubsetDecoder::SubsetDecoder(const GeneratorMatrix& h, std::span<const std::size_t> dbs)
    : field_(h.field()), dbs_(dbs.begin(), dbs.end()) {
    if (dbs_.size() != h.K()) {
        throw Error(ErrorCode::DimensionMismatch, "decoding needs exactly K databases");
    }
    for (std::size_t d : dbs_) {
        if (d >= h.N()) {
            throw Error(ErrorCode::IndexOutOfRange, "database index out of range");
        }
    }
    // Row t of H_S^T is h_{d_t}, so (H_S^T) r stacks the K projections.
    inverse_ = invert(field_, h.columns(dbs_).transposed());
}

std::vector<Symbol> SubsetDecoder::decode(std::span<const Symbol> projections) const {
    return multiply(field_, inverse_, projections);
}

DatabaseContents repair(std::span<const DatabaseContents> surviving, const GeneratorMatrix& h, std::size_t failed) {
    if (surviving.size() != h.K()) {
        throw Error(ErrorCode::DimensionMismatch, "repair needs exactly K surviving databases");
    }
    if (failed >= h.N()) {
        throw Error(ErrorCode::IndexOutOfRange, "failed database index out of range");
    }
    std::vector<std::size_t> dbs;
    for (const DatabaseContents& s : surviving) {
        if (s.index == failed) {
            throw Error(ErrorCode::InvalidParams, "failed database listed as a survivor");
        }
        if (s.symbols.size() != surviving.front().symbols.size() ||
            s.rows_per_message != surviving.front().rows_per_message) {
            throw Error(ErrorCode::DimensionMismatch, "survivors hold different amounts of data");
        }
        dbs.push_back(s.index);
    }
    if (std::set<std::size_t>(dbs.begin(), dbs.end()).size() != dbs.size()) {
        throw Error(ErrorCode::InvalidParams, "surviving databases must be distinct");
    }
    SubsetDecoder decoder(h, dbs);
    const PrimeField& f = h.field();
    std::vector<Symbol> target = h.column(failed);

    DatabaseContents out;
    out.index = failed;
    out.rows_per_message = surviving.front().rows_per_message;
    out.symbols.resize(surviving.front().symbols.size());
    std::vector<Symbol> projections(dbs.size());
    for (std::size_t pos = 0; pos < out.symbols.size(); ++pos) {
        for (std::size_t t = 0; t < dbs.size(); ++t) {
            projections[t] = surviving[t].symbols[pos];
        }
        std::vector<Symbol> row = decoder.decode(projections);
        out.symbols[pos] = f.dot(target, row);
    }
    return out;
}

} // namespace cpir
