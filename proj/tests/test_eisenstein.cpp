#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "picard/eisenstein.hpp"
#include "picard/ff/sieve.hpp"

using namespace picard;

namespace {

bool is_unit(const EisensteinInt& u) { return norm(u) == 1; }

bool associates(const EisensteinInt& x, const EisensteinInt& y) {
    for (int k = 0; k < 6; ++k)
        if (SixthRoot::from_index(k).value() * x == y) return true;
    return false;
}

EisensteinInt random_element(std::mt19937_64& rng, int range) {
    auto draw = [&] { return static_cast<Int>(static_cast<long long>(rng() % (2 * range + 1)) - range); };
    return {draw(), draw()};
}

}  // namespace

TEST(Eisenstein, NormExamples) {
    EXPECT_EQ(norm({1, 0}), 1);
    EXPECT_EQ(norm({2, -1}), 7);
    EXPECT_EQ(norm({0, 0}), 0);
}

TEST(Eisenstein, ConjExamples) {
    EXPECT_EQ(conj(EisensteinInt::omega()), EisensteinInt(-1, -1));
    EXPECT_EQ(conj(EisensteinInt(5)), EisensteinInt(5));
    EXPECT_EQ(conj(EisensteinInt(2, -1)), EisensteinInt(3, 1));
}

TEST(Eisenstein, OmegaIsPrimitiveCubeRoot) {
    const EisensteinInt w = EisensteinInt::omega();
    EXPECT_EQ(w * w, EisensteinInt(-1, -1));
    EXPECT_EQ(w * w * w, EisensteinInt(1));
    EXPECT_EQ(w * w + w + EisensteinInt(1), EisensteinInt(0));
}

TEST(Eisenstein, ConjIsInvolutionAndNormIsProduct) {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 2000; ++i) {
        const EisensteinInt x = random_element(rng, 100000);
        EXPECT_EQ(conj(conj(x)), x);
        const EisensteinInt n = x * conj(x);
        EXPECT_EQ(n.b, 0);
        EXPECT_EQ(n.a, norm(x));
        EXPECT_GE(norm(x), 0);
        EXPECT_EQ(norm(x) == 0, x.is_zero());
    }
}

TEST(Eisenstein, NormIsMultiplicative) {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 1000; ++i) {
        const EisensteinInt x = random_element(rng, 1000), y = random_element(rng, 1000);
        EXPECT_EQ(norm(x * y), norm(x) * norm(y));
    }
}

TEST(Eisenstein, DivmodShrinksRemainder) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 5000; ++i) {
        const EisensteinInt x = random_element(rng, 100000), y = random_element(rng, 300);
        if (y.is_zero()) continue;
        const auto [q, r] = divmod(x, y);
        EXPECT_EQ(q * y + r, x);
        EXPECT_LT(norm(r), norm(y));
    }
    EXPECT_THROW(divmod({1, 1}, {0, 0}), PreconditionError);
}

TEST(Eisenstein, RoundingTiesTowardNegativeInfinity) {
    EXPECT_EQ(detail::round_nearest(1, 2), 0);
    EXPECT_EQ(detail::round_nearest(-1, 2), -1);
    EXPECT_EQ(detail::round_nearest(3, 2), 1);
    EXPECT_EQ(detail::round_nearest(5, 3), 2);
    EXPECT_EQ(detail::round_nearest(-5, 3), -2);
    EXPECT_EQ(detail::round_nearest(7, 1), 7);
}

TEST(Eisenstein, GcdExamples) {
    const EisensteinInt g = euclidean_gcd({6}, {4});
    EXPECT_TRUE(associates(g, {2}));
    EXPECT_EQ(euclidean_gcd({3, 5}, {0}), EisensteinInt(3, 5));
    EXPECT_TRUE(associates(euclidean_gcd({2, -1}, {7}), {2, -1}));
    EXPECT_THROW(euclidean_gcd({0}, {0}), PreconditionError);
}

TEST(Eisenstein, GcdDividesBothArguments) {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 2000; ++i) {
        const EisensteinInt x = random_element(rng, 5000), y = random_element(rng, 5000);
        if (x.is_zero() && y.is_zero()) continue;
        const EisensteinInt g = euclidean_gcd(x, y);
        EXPECT_TRUE(divides(g, x));
        EXPECT_TRUE(divides(g, y));
        // Every common divisor built in divides the gcd.
        const EisensteinInt d = random_element(rng, 30);
        if (d.is_zero()) continue;
        EXPECT_TRUE(divides(d, euclidean_gcd(x * d, y * d)));
    }
}

TEST(Eisenstein, GcdNormOnRationalIntegers) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 2000; ++i) {
        const long long m = static_cast<long long>(rng() % 100000) + 1, n = static_cast<long long>(rng() % 100000);
        const long long g = std::gcd(m, n);
        EXPECT_EQ(norm(euclidean_gcd({m}, {n})), static_cast<Int>(g) * g);
    }
}

TEST(Eisenstein, ExactDivision) {
    EXPECT_EQ(exact_div({21, 7}, {3, 1}), std::optional<EisensteinInt>(EisensteinInt(7)));
    EXPECT_FALSE(exact_div({1, 0}, {2, 0}).has_value());
    EXPECT_TRUE(divides({0}, {0}));
    EXPECT_FALSE(divides({0}, {1}));
}

TEST(Eisenstein, SixthRoots) {
    EisensteinInt prod{1};
    for (int k = 0; k < 6; ++k) {
        const EisensteinInt u = SixthRoot::from_index(k).value();
        EXPECT_TRUE(is_unit(u));
        EisensteinInt pw{1};
        for (int i = 0; i < 6; ++i) pw *= u;
        EXPECT_EQ(pw, EisensteinInt(1));
        for (int j = 0; j < k; ++j) EXPECT_NE(u, SixthRoot::from_index(j).value());
    }
    // Index k is (-w^2)^k.
    const EisensteinInt gen = -(EisensteinInt::omega() * EisensteinInt::omega());
    for (int k = 0; k < 6; ++k) {
        EXPECT_EQ(SixthRoot::from_index(k).value(), prod);
        prod *= gen;
    }
    EXPECT_TRUE(SixthRoot::from_value({0, -1}).has_value());
    EXPECT_FALSE(SixthRoot::from_value({2, 0}).has_value());
    EXPECT_THROW(SixthRoot::from_index(6), PreconditionError);
}

TEST(Eisenstein, SplitPrimeExamples) {
    const ff::FpElement z7(4, 7);
    const EisensteinInt pi7 = split_prime(7, z7);
    EXPECT_EQ(norm(pi7), 7);
    EXPECT_TRUE(associates(pi7, euclidean_gcd({4, -1}, {7})));
    const auto z13 = ff::find_cube_root_of_unity(13);
    EXPECT_EQ(norm(split_prime(13, z13)), 13);
    EXPECT_THROW(split_prime(7, ff::FpElement(1, 7)), PreconditionError);
    EXPECT_THROW(split_prime(7, ff::FpElement(3, 7)), PreconditionError);
}

TEST(Eisenstein, SigmaKillsPiButNotItsConjugate) {
    for (u64 p : {7ull, 13ull, 19ull}) {
        const auto z = ff::find_cube_root_of_unity(p);
        const EisensteinInt pi = split_prime(p, z);
        EXPECT_TRUE(sigma_apply(pi, z).is_zero()) << p;
        EXPECT_FALSE(sigma_apply(conj(pi), z).is_zero()) << p;
        EXPECT_EQ(sigma_apply(EisensteinInt::omega(), z), z);
    }
}

TEST(Eisenstein, SplitPrimeNormForAllSplitPrimesTo10000) {
    for (u64 p : ff::sieve_primes(7, 10000)) {
        if (p % 3 != 1) continue;
        const auto z = ff::find_cube_root_of_unity(p);
        const EisensteinInt pi = split_prime(p, z);
        ASSERT_EQ(norm(pi), static_cast<Int>(p));
        const EisensteinInt prod = pi * conj(pi);
        ASSERT_EQ(prod, EisensteinInt(static_cast<Int>(p)));
        // The other cube root picks the conjugate prime.
        const EisensteinInt pi2 = split_prime(p, z * z);
        ASSERT_TRUE(associates(pi2, conj(pi)));
    }
}

TEST(Eisenstein, SigmaIsRingHomomorphism) {
    std::mt19937_64 rng(6);
    const u64 p = 10009;  // 10009 = 1 mod 3
    const auto z = ff::find_cube_root_of_unity(p);
    for (int i = 0; i < 1000; ++i) {
        const EisensteinInt x = random_element(rng, 1000000), y = random_element(rng, 1000000);
        EXPECT_EQ(sigma_apply(x + y, z), sigma_apply(x, z) + sigma_apply(y, z));
        EXPECT_EQ(sigma_apply(x * y, z), sigma_apply(x, z) * sigma_apply(y, z));
    }
}
