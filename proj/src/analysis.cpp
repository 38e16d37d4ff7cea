// SPDX-License-Identifier: Apache-2.0

#include "cpir/analysis.hpp"

#include "cpir/error.hpp"

namespace cpir {

namespace {

void check(std::uint32_t N, std::uint32_t K, std::uint32_t M) {
    if (K < 1 || K > N || M < 1) {
        throw Error(ErrorCode::InvalidParams, "need 1 <= K <= N and M >= 1");
    }
}

} // namespace

Rational capacity(std::uint32_t N, std::uint32_t K, std::uint32_t M) {
    check(N, K, M);
    if (K == N) {
        return Rational(1, M);
    }
    // (1 - R_c) / (1 - R_c^M) = N^{M-1}(N - K) / (N^M - K^M)
    return Rational(ipow(N, M - 1) * (N - K), ipow(N, M) - ipow(K, M));
}

SchemeCounts scheme_counts(std::uint32_t N, std::uint32_t K, std::uint32_t M) {
    check(N, K, M);
    if (K == N) {
        throw Error(ErrorCode::InvalidParams, "scheme counts need K < N");
    }
    SchemeCounts c;
    const BigInt kn = BigInt(K) * N;
    // Round 1 holds the K^{M-1} initial desired downloads per database; round
    // i+1 gets the desired equations unlocked by round-i side information.
    for (std::uint32_t round = 1; round <= M; ++round) {
        RoundCounts rc;
        rc.round = round;
        const std::uint32_t i = round - 1;
        rc.desired = kn * binomial(M - 1, i) * ipow(K, M - 1 - i) * ipow(N - K, i);
        if (round < M) {
            rc.undesired = kn * binomial(M - 1, round) * ipow(K, M - round) * ipow(N - K, round - 1);
        }
        c.desired_total += rc.desired;
        c.undesired_total += rc.undesired;
        c.per_round.push_back(std::move(rc));
    }
    return c;
}

Rational baseline_rate(std::uint32_t K, std::uint32_t N) {
    if (N == 0 || K > N) {
        throw Error(ErrorCode::InvalidParams, "need K <= N");
    }
    return Rational(N - K, N);
}

std::vector<CurvePoint> capacity_curve(const std::vector<std::uint32_t>& m_values, std::uint32_t N,
                                       const std::vector<std::uint32_t>& k_values) {
    std::vector<CurvePoint> out;
    for (std::uint32_t m : m_values) {
        for (std::uint32_t k : k_values) {
            out.push_back({Rational(k, N), m, capacity(N, k, m)});
        }
    }
    return out;
}

void write_capacity_csv(std::ostream& out, const std::vector<CurvePoint>& curve) {
    out << "Rc_num,Rc_den,M,C_num,C_den,C_decimal\n";
    for (const CurvePoint& p : curve) {
        out << p.code_rate.num() << ',' << p.code_rate.den() << ',' << p.M << ',' << p.capacity.num() << ','
            << p.capacity.den() << ',' << p.capacity.decimal(6) << '\n';
    }
}

} // namespace cpir
