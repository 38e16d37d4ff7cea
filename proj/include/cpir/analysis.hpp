// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "cpir/rational.hpp"

namespace cpir {

/// C = (1 + R_c + ... + R_c^{M-1})^{-1} with R_c = K/N. Throws InvalidParams
/// unless 1 <= K <= N and M >= 1.
Rational capacity(std::uint32_t N, std::uint32_t K, std::uint32_t M);

struct RoundCounts {
    std::uint32_t round = 0; // number of terms per equation
    BigInt desired;
    BigInt undesired;
};

/// Equation totals of the retrieval scheme over all K repetitions.
struct SchemeCounts {
    BigInt desired_total;
    BigInt undesired_total;
    std::vector<RoundCounts> per_round;

    BigInt downloaded() const { return desired_total + undesired_total; }
    Rational rate() const { return Rational(desired_total, downloaded()); }
};

/// Throws InvalidParams unless 1 <= K < N and M >= 1.
SchemeCounts scheme_counts(std::uint32_t N, std::uint32_t K, std::uint32_t M);

/// 1 - R_c, the rate of the earlier MDS-coded scheme this improves on.
Rational baseline_rate(std::uint32_t K, std::uint32_t N);

struct CurvePoint {
    Rational code_rate;
    std::uint32_t M = 0;
    Rational capacity;
};

/// Rows for every M in `m_values` and every K in `k_values` at fixed N.
std::vector<CurvePoint> capacity_curve(const std::vector<std::uint32_t>& m_values, std::uint32_t N,
                                       const std::vector<std::uint32_t>& k_values);

/// CSV with header Rc_num,Rc_den,M,C_num,C_den,C_decimal.
void write_capacity_csv(std::ostream& out, const std::vector<CurvePoint>& curve);

} // namespace cpir
