// SPDX-License-Identifier: Apache-2.0

#include "cpir/rational.hpp"

#include <sstream>

#include "cpir/error.hpp"

namespace cpir {

Rational::Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_ == 0) {
        throw Error(ErrorCode::InvalidParams, "zero denominator");
    }
    if (den_ < 0) {
        num_ = -num_;
        den_ = -den_;
    }
    BigInt g = boost::multiprecision::gcd(boost::multiprecision::abs(num_), den_);
    if (g > 1) {
        num_ /= g;
        den_ /= g;
    }
}

std::string Rational::str() const {
    return den_ == 1 ? num_.str() : fraction();
}

std::string Rational::fraction() const {
    return num_.str() + "/" + den_.str();
}

double Rational::to_double() const {
    return num_.convert_to<double>() / den_.convert_to<double>();
}

std::string Rational::decimal(int digits) const {
    BigInt scale = ipow(10, static_cast<unsigned>(digits));
    BigInt a = boost::multiprecision::abs(num_) * scale;
    BigInt q = a / den_;
    if ((a % den_) * 2 >= den_) {
        ++q;
    }
    std::string s = q.str();
    if (static_cast<int>(s.size()) <= digits) {
        s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
    }
    std::ostringstream out;
    if (num_ < 0 && q != 0) {
        out << '-';
    }
    out << s.substr(0, s.size() - static_cast<std::size_t>(digits));
    if (digits > 0) {
        out << '.' << s.substr(s.size() - static_cast<std::size_t>(digits));
    }
    return out.str();
}

Rational operator+(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.num_, a.den_ * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) {
        throw Error(ErrorCode::InvalidParams, "division by zero");
    }
    return Rational(a.num_ * b.den_, a.den_ * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    BigInt lhs = a.num_ * b.den_;
    BigInt rhs = b.num_ * a.den_;
    if (lhs < rhs) {
        return std::strong_ordering::less;
    }
    if (lhs > rhs) {
        return std::strong_ordering::greater;
    }
    return std::strong_ordering::equal;
}

BigInt ipow(const BigInt& base, unsigned exp) {
    BigInt result = 1;
    for (unsigned i = 0; i < exp; ++i) {
        result *= base;
    }
    return result;
}

BigInt binomial(unsigned n, unsigned k) {
    if (k > n) {
        return 0;
    }
    BigInt result = 1;
    for (unsigned i = 0; i < k; ++i) {
        result = result * (n - i) / (i + 1);
    }
    return result;
}

} // namespace cpir
