// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace cpir {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational, always reduced with a positive denominator.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(BigInt num) : num_(std::move(num)), den_(1) {} // NOLINT: implicit by intent
    Rational(std::int64_t num) : num_(num), den_(1) {}      // NOLINT
    Rational(BigInt num, BigInt den);

    const BigInt& num() const noexcept { return num_; }
    const BigInt& den() const noexcept { return den_; }

    /// "p/q", or "p" when the denominator is 1.
    std::string str() const;
    /// Always "p/q".
    std::string fraction() const;
    double to_double() const;
    /// Rounded decimal with `digits` places.
    std::string decimal(int digits = 6) const;

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    /// Throws InvalidParams on division by zero.
    friend Rational operator/(const Rational& a, const Rational& b);

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

private:
    BigInt num_;
    BigInt den_;
};

BigInt ipow(const BigInt& base, unsigned exp);
BigInt binomial(unsigned n, unsigned k);

} // namespace cpir
