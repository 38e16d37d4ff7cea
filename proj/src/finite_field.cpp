// SPDX-License-Identifier: Apache-2.0

#include "cpir/finite_field.hpp"

#include <utility>

#include "cpir/error.hpp"

namespace cpir {

bool is_prime(std::uint64_t n) noexcept {
    if (n < 2) {
        return false;
    }
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            return false;
        }
    }
    return true;
}

PrimeField::PrimeField(std::uint32_t q) : q_(q) {
    if (q >= (1u << 31) || !is_prime(q)) {
        throw Error(ErrorCode::InvalidParams, "field modulus " + std::to_string(q) + " is not a prime below 2^31");
    }
}

Symbol PrimeField::pow(Symbol base, std::uint64_t exp) const noexcept {
    Symbol result = reduce(1);
    while (exp > 0) {
        if (exp & 1) {
            result = mul(result, base);
        }
        base = mul(base, base);
        exp >>= 1;
    }
    return result;
}

Symbol PrimeField::inv(Symbol a) const {
    if (a == 0) {
        throw Error(ErrorCode::ZeroInverse, "zero has no multiplicative inverse");
    }
    // Fermat: a^(q-2) = a^-1 for prime q.
    return pow(a, q_ - 2);
}

Symbol PrimeField::dot(std::span<const Symbol> a, std::span<const Symbol> b) const {
    if (a.size() != b.size()) {
        throw Error(ErrorCode::DimensionMismatch, "dot product of vectors with different lengths");
    }
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc = (acc + static_cast<std::uint64_t>(a[i]) * b[i]) % q_;
    }
    return static_cast<Symbol>(acc);
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<Symbol> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows * cols) {
        throw Error(ErrorCode::DimensionMismatch, "matrix entry count does not match its shape");
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1;
    }
    return m;
}

std::vector<Symbol> Matrix::column(std::size_t c) const {
    std::vector<Symbol> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        out[r] = (*this)(r, c);
    }
    return out;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            t(c, r) = (*this)(r, c);
        }
    }
    return t;
}

Matrix multiply(const PrimeField& f, const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "matrix product with incompatible shapes");
    }
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            Symbol aik = a(i, k);
            if (aik == 0) {
                continue;
            }
            for (std::size_t j = 0; j < b.cols(); ++j) {
                out(i, j) = f.add(out(i, j), f.mul(aik, b(k, j)));
            }
        }
    }
    return out;
}

std::vector<Symbol> multiply(const PrimeField& f, const Matrix& a, std::span<const Symbol> x) {
    if (a.cols() != x.size()) {
        throw Error(ErrorCode::DimensionMismatch, "matrix-vector product with incompatible shapes");
    }
    std::vector<Symbol> out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        out[i] = f.dot(a.row(i), x);
    }
    return out;
}

namespace {

// Reduces `m` in place to row echelon form over its first `pivot_cols`
// columns. Returns the number of pivots found; when `jordan` is set, the
// pivot rows are normalized and eliminated above as well.
std::size_t eliminate(const PrimeField& f, Matrix& m, std::size_t pivot_cols, bool jordan) {
    std::size_t pivot_row = 0;
    for (std::size_t col = 0; col < pivot_cols && pivot_row < m.rows(); ++col) {
        std::size_t found = pivot_row;
        while (found < m.rows() && m(found, col) == 0) {
            ++found;
        }
        if (found == m.rows()) {
            continue;
        }
        if (found != pivot_row) {
            for (std::size_t c = 0; c < m.cols(); ++c) {
                std::swap(m(found, c), m(pivot_row, c));
            }
        }
        Symbol scale = f.inv(m(pivot_row, col));
        for (std::size_t c = col; c < m.cols(); ++c) {
            m(pivot_row, c) = f.mul(m(pivot_row, c), scale);
        }
        for (std::size_t r = jordan ? 0 : pivot_row + 1; r < m.rows(); ++r) {
            if (r == pivot_row || m(r, col) == 0) {
                continue;
            }
            Symbol factor = m(r, col);
            for (std::size_t c = col; c < m.cols(); ++c) {
                m(r, c) = f.sub(m(r, c), f.mul(factor, m(pivot_row, c)));
            }
        }
        ++pivot_row;
    }
    return pivot_row;
}

} // namespace

std::vector<Symbol> solve_linear(const PrimeField& f, const Matrix& a, std::span<const Symbol> b) {
    if (!a.square() || b.size() != a.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "solve_linear needs a square system");
    }
    const std::size_t n = a.rows();
    Matrix aug(n, n + 1);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            aug(r, c) = a(r, c);
        }
        aug(r, n) = b[r];
    }
    if (eliminate(f, aug, n, false) < n) {
        throw Error(ErrorCode::SingularMatrix, "system matrix is singular");
    }
    // Back substitution; the diagonal is already 1.
    std::vector<Symbol> x(n);
    for (std::size_t i = n; i-- > 0;) {
        Symbol acc = aug(i, n);
        for (std::size_t c = i + 1; c < n; ++c) {
            acc = f.sub(acc, f.mul(aug(i, c), x[c]));
        }
        x[i] = acc;
    }
    return x;
}

Matrix invert(const PrimeField& f, const Matrix& a) {
    if (!a.square()) {
        throw Error(ErrorCode::DimensionMismatch, "only square matrices can be inverted");
    }
    const std::size_t n = a.rows();
    Matrix aug(n, 2 * n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            aug(r, c) = a(r, c);
        }
        aug(r, n + r) = 1;
    }
    if (eliminate(f, aug, n, true) < n) {
        throw Error(ErrorCode::SingularMatrix, "matrix is singular");
    }
    Matrix inv(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            inv(r, c) = aug(r, n + c);
        }
    }
    return inv;
}

std::size_t rank(const PrimeField& f, Matrix a) {
    return eliminate(f, a, a.cols(), false);
}

} // namespace cpir
