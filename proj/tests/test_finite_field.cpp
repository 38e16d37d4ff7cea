// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>

#include "cpir/error.hpp"
#include "cpir/finite_field.hpp"

using namespace cpir;

namespace {

// Exhaustive search over F_q^n for all x with A x = b.
std::vector<std::vector<Symbol>> brute_force_solutions(const PrimeField& f, const Matrix& a,
                                                       const std::vector<Symbol>& b) {
    const std::size_t n = a.cols();
    std::vector<std::vector<Symbol>> found;
    std::vector<Symbol> x(n, 0);
    while (true) {
        bool ok = true;
        for (std::size_t r = 0; r < a.rows() && ok; ++r) {
            Symbol acc = 0;
            for (std::size_t c = 0; c < n; ++c) {
                acc = (acc + a(r, c) * x[c]) % f.modulus();
            }
            ok = acc == b[r];
        }
        if (ok) {
            found.push_back(x);
        }
        std::size_t i = 0;
        while (i < n && ++x[i] == f.modulus()) {
            x[i++] = 0;
        }
        if (i == n) {
            return found;
        }
    }
}

} // namespace

TEST_CASE("field arithmetic examples") {
    PrimeField f7(7), f257(257);
    CHECK(f7.add(0, 5) == 5);
    CHECK(f7.add(3, 4) == 0);
    CHECK(f257.add(200, 100) == 43);
    CHECK(f257.mul(1, 99) == 99);
    CHECK(f7.mul(2, 4) == 1);
    CHECK(f257.mul(16, 16) == 256);
    CHECK(f7.inv(1) == 1);
    CHECK(f257.inv(1) == 1);
    CHECK(f7.inv(2) == 4);
    CHECK(f7.sub(2, 5) == 4);
    CHECK(f7.neg(0) == 0);
    CHECK(f7.neg(3) == 4);
}

TEST_CASE("zero has no inverse") {
    PrimeField f(7);
    CHECK_THROWS_AS(f.inv(0), Error);
    try {
        f.inv(0);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ZeroInverse);
    }
}

TEST_CASE("modulus must be prime") {
    CHECK_THROWS_AS(PrimeField(8), Error);
    CHECK_THROWS_AS(PrimeField(1), Error);
    CHECK_NOTHROW(PrimeField(2));
    CHECK_NOTHROW(PrimeField(2147483647u));
    CHECK(is_prime(257));
    CHECK_FALSE(is_prime(255));
}

TEST_CASE("field axioms on random triples") {
    std::mt19937_64 rng(12345);
    for (std::uint32_t q : {2u, 7u, 257u, 65537u, 2147483647u}) {
        PrimeField f(q);
        std::uniform_int_distribution<std::uint32_t> pick(0, q - 1);
        for (int i = 0; i < 10000; ++i) {
            Symbol a = pick(rng), b = pick(rng), c = pick(rng);
            REQUIRE(f.add(a, b) == f.add(b, a));
            REQUIRE(f.add(f.add(a, b), c) == f.add(a, f.add(b, c)));
            REQUIRE(f.mul(a, b) == f.mul(b, a));
            REQUIRE(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
            REQUIRE(f.add(a, f.neg(a)) == 0);
            if (a != 0) {
                REQUIRE(f.mul(a, f.inv(a)) == 1);
            }
        }
    }
}

TEST_CASE("solve_linear examples") {
    PrimeField f(7);
    SUBCASE("identity") {
        std::vector<Symbol> b{3, 6, 0};
        CHECK(solve_linear(f, Matrix::identity(3), b) == b);
    }
    SUBCASE("2x2 matches brute force") {
        Matrix a(2, 2, {1, 1, 1, 2});
        std::vector<Symbol> b{3, 5};
        auto all = brute_force_solutions(f, a, b);
        REQUIRE(all.size() == 1);
        CHECK(all.front() == std::vector<Symbol>{1, 2});
        CHECK(solve_linear(f, a, b) == std::vector<Symbol>{1, 2});
    }
    SUBCASE("proportional rows are singular") {
        Matrix a(2, 2, {1, 2, 2, 4});
        std::vector<Symbol> b{1, 1};
        try {
            solve_linear(f, a, b);
            FAIL("expected SingularMatrix");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::SingularMatrix);
        }
    }
    SUBCASE("shape errors") {
        CHECK_THROWS_AS(solve_linear(f, Matrix(2, 3), std::vector<Symbol>{1, 2}), Error);
        CHECK_THROWS_AS(solve_linear(f, Matrix(2, 2), std::vector<Symbol>{1}), Error);
        CHECK_THROWS_AS(Matrix(2, 2, {1, 2, 3}), Error);
    }
}

TEST_CASE("solve_linear agrees with exhaustive search for small q and K") {
    std::mt19937_64 rng(99);
    for (std::uint32_t q : {2u, 3u, 5u, 7u}) {
        PrimeField f(q);
        std::uniform_int_distribution<std::uint32_t> pick(0, q - 1);
        for (std::size_t k = 1; k <= 3; ++k) {
            for (int trial = 0; trial < 40; ++trial) {
                Matrix a(k, k);
                std::vector<Symbol> b(k);
                for (std::size_t r = 0; r < k; ++r) {
                    for (std::size_t c = 0; c < k; ++c) {
                        a(r, c) = pick(rng);
                    }
                    b[r] = pick(rng);
                }
                auto all = brute_force_solutions(f, a, b);
                bool nonsingular = rank(f, a) == k;
                if (nonsingular) {
                    REQUIRE(all.size() == 1);
                    REQUIRE(solve_linear(f, a, b) == all.front());
                } else {
                    REQUIRE(all.size() != 1);
                    REQUIRE_THROWS_AS(solve_linear(f, a, b), Error);
                }
            }
        }
    }
}

TEST_CASE("A times solve_linear(A, b) equals b") {
    std::mt19937_64 rng(7);
    PrimeField f(257);
    std::uniform_int_distribution<std::uint32_t> pick(0, 256);
    int solved = 0;
    for (int trial = 0; trial < 500; ++trial) {
        std::size_t k = 1 + trial % 6;
        Matrix a(k, k);
        std::vector<Symbol> b(k);
        for (std::size_t r = 0; r < k; ++r) {
            for (std::size_t c = 0; c < k; ++c) {
                a(r, c) = pick(rng);
            }
            b[r] = pick(rng);
        }
        if (rank(f, a) < k) {
            continue;
        }
        auto x = solve_linear(f, a, b);
        REQUIRE(multiply(f, a, x) == b);
        REQUIRE(multiply(f, a, invert(f, a)) == Matrix::identity(k));
        ++solved;
    }
    CHECK(solved > 450);
}
