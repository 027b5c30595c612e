#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "picard/curve_model.hpp"
#include "picard/ff/sieve.hpp"

using namespace picard;

namespace {

/// Closed-form discriminant of x^4 + p x^2 + q x + r.
Int closed_form_disc(Int p, Int q, Int r) {
    return 256 * r * r * r - 128 * p * p * r * r + 144 * p * q * q * r - 27 * q * q * q * q + 16 * p * p * p * p * r -
           4 * p * p * p * q * q;
}

/// Affine points of y^3 = a4 x^4 + ... + a0 over F_p, by brute force.
long affine_count(const std::vector<Int>& quartic, u64 p) {
    std::vector<int> cubes(p, 0);
    for (u64 y = 0; y < p; ++y) ++cubes[y * y % p * y % p];
    long total = 0;
    for (u64 x = 0; x < p; ++x) {
        Int v = 0;
        for (Int c : quartic) v = v * static_cast<Int>(x) + c;
        total += cubes[mod_floor(v, p)];
    }
    return total;
}

/// disc(psi) mod a prime m, as the Sylvester determinant of psi and psi'
/// over F_m.
u64 disc_psi_mod(const Psi9& psi, u64 m) {
    std::vector<Int> c(psi.coeffs.begin(), psi.coeffs.end());
    const ff::PolyFp f = ff::PolyFp::from_ints(m, c);
    const ff::PolyFp df = f.derivative();
    const int n = f.degree(), k = df.degree();
    const int size = n + k;
    std::vector<std::vector<u64>> mat(static_cast<std::size_t>(size), std::vector<u64>(static_cast<std::size_t>(size), 0));
    for (int r = 0; r < k; ++r)
        for (int j = 0; j <= n; ++j) mat[static_cast<std::size_t>(r)][static_cast<std::size_t>(r + j)] = f.coeff(static_cast<std::size_t>(n - j));
    for (int r = 0; r < n; ++r)
        for (int j = 0; j <= k; ++j) mat[static_cast<std::size_t>(k + r)][static_cast<std::size_t>(r + j)] = df.coeff(static_cast<std::size_t>(k - j));
    const ff::Modulus mod(m);
    u64 det = 1;
    for (int col = 0; col < size; ++col) {
        int piv = -1;
        for (int r = col; r < size; ++r)
            if (mat[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) return 0;
        if (piv != col) {
            std::swap(mat[static_cast<std::size_t>(piv)], mat[static_cast<std::size_t>(col)]);
            det = mod.neg(det);
        }
        const u64 inv = mod.inv(mat[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)]);
        det = mod.mul(det, mat[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)]);
        for (int r = col + 1; r < size; ++r) {
            const u64 factor = mod.mul(mat[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)], inv);
            if (factor == 0) continue;
            for (int j = col; j < size; ++j)
                mat[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] =
                    mod.sub(mat[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)],
                            mod.mul(factor, mat[static_cast<std::size_t>(col)][static_cast<std::size_t>(j)]));
        }
    }
    // disc = (-1)^(n(n-1)/2) Res(f, f') for monic f of degree 9: sign (-1)^36 = +1.
    return det;
}

}  // namespace

TEST(Discriminant, Examples) {
    EXPECT_EQ(discriminant(0, 0, 0), 0);
    EXPECT_EQ(discriminant(0, 1, 1), 229);
    EXPECT_EQ(discriminant(0, 0, 1), 256);
    EXPECT_EQ(discriminant(3, 2, 1), 1264);
}

TEST(Discriminant, MatchesClosedForm) {
    for (auto [a, b, c] : std::vector<std::array<Int, 3>>{{0, 1, 1}, {3, 2, 1}, {-7, 5, 2}, {1000, -999, 12345}})
        EXPECT_EQ(discriminant(a, b, c), closed_form_disc(a, b, c));
    std::mt19937_64 rng(1);
    for (int i = 0; i < 500; ++i) {
        const Int a = static_cast<Int>(rng() % 2001) - 1000, b = static_cast<Int>(rng() % 2001) - 1000,
                  c = static_cast<Int>(rng() % 2001) - 1000;
        ASSERT_EQ(discriminant(a, b, c), closed_form_disc(a, b, c));
    }
}

TEST(Psi, Examples) {
    const Psi9 zero = compute_psi(0, 0, 0);
    for (int i = 0; i < 9; ++i) EXPECT_EQ(zero.coeffs[static_cast<std::size_t>(i)], 0);
    EXPECT_EQ(zero.coeffs[9], 1);
    const Psi9 quartic_plus_one = compute_psi(0, 0, 1);
    EXPECT_EQ(quartic_plus_one.coeffs, (std::array<Int, 10>{0, -432, 0, 0, 0, 1080, 0, 0, 0, 1}));
    // x^4 + x + 1, substituted term by term.
    EXPECT_EQ(compute_psi(0, 1, 1).coeffs, (std::array<Int, 10>{-8, -432, -864, -636, 0, 1080, -168, 0, 0, 1}));
}

TEST(Psi, ConstantTermAndLeadingCoefficient) {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 100; ++i) {
        const Int a = static_cast<Int>(rng() % 41) - 20, b = static_cast<Int>(rng() % 41) - 20,
                  c = static_cast<Int>(rng() % 41) - 20;
        const Psi9 psi = compute_psi(a, b, c);
        EXPECT_EQ(psi.coeffs[9], 1);
        EXPECT_EQ(psi.coeffs[0], -8 * b * b * b);
    }
}

// disc(psi) = -2^24 3^27 D^2: modulo every prime q > 3, -disc(psi) / (2^24 3^27)
// must be a square (or zero).
TEST(Psi, DiscriminantHasSquareCofactor) {
    std::mt19937_64 rng(3);
    const auto moduli = ff::sieve_primes(5, 400);
    for (int i = 0; i < 20; ++i) {
        const Int a = static_cast<Int>(rng() % 11) - 5, b = static_cast<Int>(rng() % 11) - 5,
                  c = static_cast<Int>(rng() % 11) - 5;
        const Psi9 psi = compute_psi(a, b, c);
        for (u64 q : moduli) {
            const ff::Modulus m(q);
            const u64 d = disc_psi_mod(psi, q);
            const u64 scale = m.mul(m.pow(2, 24), m.pow(3, 27));
            const u64 cof = m.mul(m.neg(d), m.inv(scale));
            ASSERT_TRUE(cof == 0 || m.pow(cof, (q - 1) / 2) == 1) << "curve " << (int)a << "," << (int)b << "," << (int)c << " q=" << q;
        }
    }
}

TEST(Normalize, Examples) {
    const std::vector<Int> already{1, 0, 3, 2, 1};
    const PicardCurve c = normalize(already);
    EXPECT_EQ(c.f2(), 3);
    EXPECT_EQ(c.f1(), 2);
    EXPECT_EQ(c.f0(), 1);

    // x^4 + 4x^3 shifted by x -> x - 1; it is inseparable, so only the
    // substitution itself is available for it.
    const std::vector<Int> shifted{1, 4, 0, 0, 0};
    EXPECT_EQ(depress(shifted), (std::array<Int, 3>{-6, 8, -3}));
    EXPECT_THROW(normalize(shifted), InputError);
    const std::vector<Int> shifted_sep{1, 4, 0, 0, 1};
    const PicardCurve s = normalize(shifted_sep);  // (x-1)^4 + 4(x-1)^3 + 1
    EXPECT_EQ(s.f2(), -6);
    EXPECT_EQ(s.f1(), 8);
    EXPECT_EQ(s.f0(), -2);

    const std::vector<Int> scaled{2, 0, 0, 0, 2};
    const PicardCurve t = normalize(scaled);
    EXPECT_EQ(t.f2(), 0);
    EXPECT_EQ(t.f1(), 0);
    EXPECT_EQ(t.f0(), 16);

    const std::vector<Int> odd_cubic{2, 3, 0, 1, 5};
    const PicardCurve u = normalize(odd_cubic);
    EXPECT_EQ(u.f2(), -216);
    EXPECT_EQ(u.f1(), 3776);
    EXPECT_EQ(u.f0(), 147664);
}

TEST(Normalize, RejectsBadInput) {
    EXPECT_THROW(normalize(std::vector<Int>{0, 1, 1, 1, 1}), InputError);
    EXPECT_THROW(normalize(std::vector<Int>{1, 1, 1}), InputError);
    EXPECT_THROW(normalize(std::vector<Int>{1, 0, 0, 0, 0}), InputError);
    EXPECT_THROW(PicardCurve::from_depressed(-2, 0, 1), InputError);  // (x^2 - 1)^2
}

TEST(Normalize, IdempotentAndPreservesPointCounts) {
    std::mt19937_64 rng(4);
    int done = 0;
    while (done < 40) {
        std::vector<Int> q(5);
        for (auto& v : q) v = static_cast<Int>(rng() % 21) - 10;
        if (q[0] == 0) continue;
        PicardCurve c = PicardCurve::from_depressed(0, 1, 1);
        try {
            c = normalize(q);
        } catch (const InputError&) {
            continue;
        }
        const std::vector<Int> again{1, 0, c.f2(), c.f1(), c.f0()};
        EXPECT_EQ(normalize(again), c);
        // Isomorphic over Q: equal affine counts at primes away from 2, 3,
        // the leading coefficient and the discriminant.
        for (u64 p : ff::sieve_primes(5, 200)) {
            if (mod_floor(q[0], p) == 0 || mod_floor(c.disc(), p) == 0) continue;
            const std::vector<Int> model{1, 0, c.f2(), c.f1(), c.f0()};
            ASSERT_EQ(affine_count(q, p), affine_count(model, p)) << "p=" << p;
        }
        ++done;
    }
}

TEST(Classify, Examples) {
    const PicardCurve c1 = PicardCurve::from_depressed(0, 1, 1);
    EXPECT_EQ(classify_prime(c1, 229), Reduction::bad);
    EXPECT_EQ(classify_prime(c1, 5), Reduction::inert);
    EXPECT_EQ(classify_prime(c1, 7), Reduction::split);
    EXPECT_EQ(classify_prime(c1, 2), Reduction::bad);
    EXPECT_EQ(classify_prime(c1, 3), Reduction::bad);
}

TEST(Classify, PartitionsPrimes) {
    const PicardCurve c2 = PicardCurve::from_depressed(3, 2, 1);
    for (u64 p : ff::sieve_primes(2, 20000)) {
        const Reduction r = classify_prime(c2, p);
        const bool bad = p == 2 || p == 3 || c2.disc() % static_cast<Int>(p) == 0;
        ASSERT_EQ(r == Reduction::bad, bad);
        if (r == Reduction::inert) {
            ASSERT_EQ(p % 3, 2u);
        }
        if (r == Reduction::split) {
            ASSERT_EQ(p % 3, 1u);
        }
    }
    EXPECT_EQ(classify_prime(c2, 79), Reduction::bad);  // 1264 = 16 * 79
}

TEST(Curve, ReductionsModP) {
    const PicardCurve c = PicardCurve::from_depressed(-3, 2, -1);
    EXPECT_EQ(c.f_mod(7), ff::PolyFp(7, {6, 2, 4, 0, 1}));
    EXPECT_EQ(c.psi_mod(7).degree(), 9);
}
