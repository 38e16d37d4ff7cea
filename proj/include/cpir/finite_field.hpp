// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cpir {

/// A field symbol, always reduced into [0, q).
using Symbol = std::uint32_t;

bool is_prime(std::uint64_t n) noexcept;

/**
 * Prime field F_q. The modulus is limited to 31 bits so that products fit in
 * 64-bit intermediates.
 */
class PrimeField {
public:
    static constexpr std::uint32_t kDefaultModulus = 257;

    /// Throws InvalidParams unless q is a prime below 2^31.
    explicit PrimeField(std::uint32_t q = kDefaultModulus);

    std::uint32_t modulus() const noexcept { return q_; }

    bool contains(std::uint64_t v) const noexcept { return v < q_; }
    Symbol reduce(std::uint64_t v) const noexcept { return static_cast<Symbol>(v % q_); }

    Symbol add(Symbol a, Symbol b) const noexcept {
        std::uint32_t s = a + b;
        return s >= q_ ? s - q_ : s;
    }
    Symbol sub(Symbol a, Symbol b) const noexcept { return a >= b ? a - b : a + (q_ - b); }
    Symbol neg(Symbol a) const noexcept { return a == 0 ? 0 : q_ - a; }
    Symbol mul(Symbol a, Symbol b) const noexcept {
        return static_cast<Symbol>(static_cast<std::uint64_t>(a) * b % q_);
    }
    Symbol pow(Symbol base, std::uint64_t exp) const noexcept;

    /// Throws ZeroInverse for a == 0.
    Symbol inv(Symbol a) const;

    /// Sum over i of a[i]*b[i]; spans must have equal length.
    Symbol dot(std::span<const Symbol> a, std::span<const Symbol> b) const;

    friend bool operator==(const PrimeField&, const PrimeField&) = default;

private:
    std::uint32_t q_;
};

/// Dense row-major matrix over a prime field.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}
    /// Throws DimensionMismatch if entries.size() != rows * cols.
    Matrix(std::size_t rows, std::size_t cols, std::vector<Symbol> entries);

    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    Symbol& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    Symbol operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<Symbol> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const Symbol> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }
    std::vector<Symbol> column(std::size_t c) const;

    const std::vector<Symbol>& entries() const noexcept { return data_; }

    Matrix transposed() const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Symbol> data_;
};

Matrix multiply(const PrimeField& f, const Matrix& a, const Matrix& b);
std::vector<Symbol> multiply(const PrimeField& f, const Matrix& a, std::span<const Symbol> x);

/**
 * Solves A x = b by Gaussian elimination. The pivot of each column is the
 * first row at or below the diagonal with a nonzero entry, so results are
 * reproducible. Throws DimensionMismatch or SingularMatrix.
 */
std::vector<Symbol> solve_linear(const PrimeField& f, const Matrix& a, std::span<const Symbol> b);

/// Gauss-Jordan inverse with the same pivot rule. Throws SingularMatrix.
Matrix invert(const PrimeField& f, const Matrix& a);

std::size_t rank(const PrimeField& f, Matrix a);

} // namespace cpir
