// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cpir/finite_field.hpp"

namespace cpir {

/// Upper bounds that keep subset bitmasks and storage sizes manageable.
inline constexpr std::uint32_t kMaxMessages = 16;
inline constexpr std::uint64_t kMaxRowsPerMessage = std::uint64_t{1} << 22;

/**
 * Parameters of an (N, K) MDS-coded store holding M messages. Every message
 * has rows_per_message() = N^M rows of K symbols each, which is the length
 * the retrieval scheme needs.
 */
struct CodeParams {
    std::uint32_t N = 0;
    std::uint32_t K = 0;
    std::uint32_t M = 0;
    PrimeField field;

    /// Validates and builds. Throws InvalidParams or FieldTooSmall.
    static CodeParams make(std::uint32_t n, std::uint32_t k, std::uint32_t m,
                           std::uint32_t q = PrimeField::kDefaultModulus);

    void validate() const;
    std::size_t rows_per_message() const;

    friend bool operator==(const CodeParams&, const CodeParams&) = default;
};

/// K x N generator whose every K columns are linearly independent.
class GeneratorMatrix {
public:
    /// Accepts a user supplied matrix only if it passes verify_mds.
    static GeneratorMatrix from_matrix(const PrimeField& field, Matrix h);

    const PrimeField& field() const noexcept { return field_; }
    const Matrix& matrix() const noexcept { return h_; }
    std::size_t K() const noexcept { return h_.rows(); }
    std::size_t N() const noexcept { return h_.cols(); }

    /// Column h_n, 0-based.
    std::vector<Symbol> column(std::size_t n) const { return h_.column(n); }

    /// The K x |dbs| submatrix made of the given columns.
    Matrix columns(std::span<const std::size_t> dbs) const;

private:
    GeneratorMatrix(const PrimeField& field, Matrix h) : field_(field), h_(std::move(h)) {}
    friend GeneratorMatrix build_generator(const CodeParams&, std::optional<std::vector<Symbol>>);

    PrimeField field_;
    Matrix h_;
};

/**
 * Vandermonde generator with columns (1, a_n, a_n^2, ..., a_n^{K-1}).
 * Default evaluation points are a_n = n for n = 1..N. Throws FieldTooSmall if
 * q <= N, DuplicatePoints for repeated points, InvalidParams for points
 * outside [1, q) or of the wrong count.
 */
GeneratorMatrix build_generator(const CodeParams& params,
                                std::optional<std::vector<Symbol>> points = std::nullopt);

/// True iff every K-column submatrix of the K x N matrix `h` is invertible.
/// Throws TooLargeToVerify when C(N, K) exceeds 10^5.
bool verify_mds(const PrimeField& field, const Matrix& h);
inline bool verify_mds(const GeneratorMatrix& h) { return verify_mds(h.field(), h.matrix()); }

/// M messages, each rows_per_message x K.
using MessageSet = std::vector<Matrix>;

/// Coded symbols held by one database: entry (m, j) is h_n^T w_j^[m],
/// stored message-major then row-major.
struct DatabaseContents {
    std::size_t index = 0;
    std::size_t rows_per_message = 0;
    std::vector<Symbol> symbols;

    Symbol at(std::size_t message, std::size_t row) const { return symbols[message * rows_per_message + row]; }
    std::size_t message_count() const noexcept {
        return rows_per_message == 0 ? 0 : symbols.size() / rows_per_message;
    }

    friend bool operator==(const DatabaseContents&, const DatabaseContents&) = default;
};

/// Throws DimensionMismatch if the messages disagree with each other or H.
std::vector<DatabaseContents> encode(const MessageSet& messages, const GeneratorMatrix& h);

/**
 * Inverts the projection of a row onto K database columns: given
 * h_{d_t}^T r for the K databases d_t, recovers r. The inverse of the K x K
 * system is computed once per database set.
 */
class SubsetDecoder {
public:
    SubsetDecoder(const GeneratorMatrix& h, std::span<const std::size_t> dbs);

    const std::vector<std::size_t>& databases() const noexcept { return dbs_; }
    std::vector<Symbol> decode(std::span<const Symbol> projections) const;

private:
    PrimeField field_;
    std::vector<std::size_t> dbs_;
    Matrix inverse_;
};

/**
 * Rebuilds the contents of database `failed` from exactly K surviving
 * databases: every coded row is decoded from the survivors and re-projected
 * onto h_failed.
 */
DatabaseContents repair(std::span<const DatabaseContents> surviving, const GeneratorMatrix& h, std::size_t failed);

} // namespace cpir
