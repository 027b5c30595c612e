#pragma once

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "picard/errors.hpp"
#include "picard/ff/poly.hpp"
#include "picard/int128.hpp"

namespace picard {

/// Monic degree-9 polynomial attached to x^4 + f2 x^2 + f1 x + f0 whose
/// F_p-roots decide the 2-torsion behaviour at inert primes.
struct Psi9 {
    std::array<Int, 10> coeffs{};  // ascending; coeffs[9] == 1

    friend bool operator==(const Psi9&, const Psi9&) = default;
};

/// Provisional classification before the Cartier-Manin matrix is known.
enum class Reduction { bad, split, inert };

/// Final classification of a prime for a given curve.
enum class PrimeClass { bad, split_ordinary, split_nonordinary, inert };

inline std::string_view to_string(PrimeClass c) {
    switch (c) {
        case PrimeClass::bad: return "bad";
        case PrimeClass::split_ordinary: return "split_ordinary";
        case PrimeClass::split_nonordinary: return "split_nonordinary";
        case PrimeClass::inert: return "inert";
    }
    return "?";
}

/// disc(x^4 + f2 x^2 + f1 x + f0) as the resultant of f and f'.
inline Int discriminant(Int f2, Int f1, Int f0) {
    // Sylvester matrix of f (degree 4, three shifted rows) and
    // f' = 4x^3 + 2 f2 x + f1 (degree 3, four shifted rows).
    const std::array<Int, 5> f{1, 0, f2, f1, f0};
    const std::array<Int, 4> df{4, 0, checked_mul(2, f2), f1};
    std::array<std::array<Int, 7>, 7> m{};
    for (int r = 0; r < 3; ++r)
        for (int k = 0; k < 5; ++k) m[r][r + k] = f[k];
    for (int r = 0; r < 4; ++r)
        for (int k = 0; k < 4; ++k) m[3 + r][r + k] = df[k];

    // Fraction-free Bareiss elimination.
    Int sign = 1, prev = 1;
    for (int k = 0; k < 6; ++k) {
        if (m[k][k] == 0) {
            int swap = -1;
            for (int r = k + 1; r < 7; ++r)
                if (m[r][k] != 0) {
                    swap = r;
                    break;
                }
            if (swap < 0) return 0;
            std::swap(m[k], m[swap]);
            sign = -sign;
        }
        for (int i = k + 1; i < 7; ++i) {
            for (int j = k + 1; j < 7; ++j)
                m[i][j] = checked_sub(checked_mul(m[i][j], m[k][k]), checked_mul(m[i][k], m[k][j])) / prev;
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    // Resultant times (-1)^(n(n-1)/2) / lc = resultant for a monic quartic.
    return sign * m[6][6];
}

/// psi_f for f = x^4 + f2 x^2 + f1 x + f0.
inline Psi9 compute_psi(Int f2, Int f1, Int f0) {
    auto mul = [](std::initializer_list<Int> xs) {
        Int r = 1;
        for (Int x : xs) r = checked_mul(r, x);
        return r;
    };
    auto sum = [](std::initializer_list<Int> xs) {
        Int r = 0;
        for (Int x : xs) r = checked_add(r, x);
        return r;
    };
    Psi9 psi;
    auto& c = psi.coeffs;
    c[9] = 1;
    c[8] = 0;
    c[7] = mul({24, f2});
    c[6] = mul({-168, f1});
    c[5] = sum({mul({1080, f0}), mul({-78, f2, f2})});
    c[4] = mul({336, f1, f2});
    c[3] = sum({mul({1728, f0, f2}), mul({-636, f1, f1}), mul({80, f2, f2, f2})});
    c[2] = sum({mul({-864, f0, f1}), mul({-168, f1, f2, f2})});
    c[1] = sum({mul({-432, f0, f0}), mul({216, f0, f2, f2}), mul({-120, f1, f1, f2}), mul({-27, f2, f2, f2, f2})});
    c[0] = mul({-8, f1, f1, f1});
    return psi;
}

/// Picard curve y^3 = x^4 + f2 x^2 + f1 x + f0 with integral coefficients
/// and nonzero discriminant. Immutable once built.
class PicardCurve {
public:
    /// Curve from an already depressed monic model; throws InputError if
    /// the quartic is not separable.
    static PicardCurve from_depressed(Int f2, Int f1, Int f0) {
        const Int disc = discriminant(f2, f1, f0);
        if (disc == 0) throw InputError("quartic is not separable (zero discriminant)");
        return PicardCurve(f2, f1, f0, disc);
    }

    Int f2() const noexcept { return f2_; }
    Int f1() const noexcept { return f1_; }
    Int f0() const noexcept { return f0_; }
    Int disc() const noexcept { return disc_; }
    const Psi9& psi() const noexcept { return psi_; }

    /// Ascending integer coefficients of f.
    std::array<Int, 5> f_coeffs() const { return {f0_, f1_, f2_, 0, 1}; }

    ff::PolyFp f_mod(u64 p) const {
        const auto c = f_coeffs();
        return ff::PolyFp::from_ints(p, c);
    }

    ff::PolyFp psi_mod(u64 p) const { return ff::PolyFp::from_ints(p, psi_.coeffs); }

    friend bool operator==(const PicardCurve& a, const PicardCurve& b) {
        return a.f2_ == b.f2_ && a.f1_ == b.f1_ && a.f0_ == b.f0_;
    }

private:
    PicardCurve(Int f2, Int f1, Int f0, Int disc)
        : f2_(f2), f1_(f1), f0_(f0), disc_(disc), psi_(compute_psi(f2, f1, f0)) {}

    Int f2_, f1_, f0_;
    Int disc_;
    Psi9 psi_;
};

/// Coefficients (f2, f1, f0) of a depressed monic integral model of
/// y^3 = a4 x^4 + a3 x^3 + a2 x^2 + a1 x + a0. No separability check.
///
/// a4 != 1: f -> a4^3 f(x / a4)   (y -> a4 y), which is monic and integral.
/// a3 not divisible by 4: f -> 2^12 f(x / 8)   (y -> 16 y), cubic term 8 a3.
/// Then f -> f(x - a3/4) removes the cubic term.
inline std::array<Int, 3> depress(std::span<const Int> quartic) {
    if (quartic.size() != 5) throw InputError("expected five coefficients a4, a3, a2, a1, a0");
    const Int a4 = quartic[0];
    if (a4 == 0) throw InputError("leading coefficient is zero (not a quartic)");
    // Descending coefficients b[0] x^4 + ... + b[4].
    std::array<Int, 5> b{quartic[0], quartic[1], quartic[2], quartic[3], quartic[4]};
    if (a4 != 1) {
        b = {1, b[1], checked_mul(b[2], a4), checked_mul(b[3], checked_mul(a4, a4)),
             checked_mul(b[4], checked_mul(a4, checked_mul(a4, a4)))};
    }
    if (b[1] % 4 != 0) {
        b = {1, checked_mul(b[1], 8), checked_mul(b[2], 64), checked_mul(b[3], 512), checked_mul(b[4], 4096)};
    }
    if (b[1] != 0) {
        // f(x - s) = sum_k c_k (x - s)^k with ascending c.
        const Int s = b[1] / 4;
        const std::array<Int, 5> c{b[4], b[3], b[2], b[1], b[0]};
        std::array<Int, 5> out{};
        static constexpr Int kBinom[5][5] = {
            {1, 0, 0, 0, 0}, {1, 1, 0, 0, 0}, {1, 2, 1, 0, 0}, {1, 3, 3, 1, 0}, {1, 4, 6, 4, 1}};
        for (int k = 0; k < 5; ++k) {
            Int pw = 1;  // (-s)^(k - j), built from j = k downward
            for (int j = k; j >= 0; --j) {
                out[j] = checked_add(out[j], checked_mul(c[k], checked_mul(kBinom[k][j], pw)));
                pw = checked_mul(pw, -s);
            }
        }
        if (out[3] != 0 || out[4] != 1) throw InternalError("normalize: shift did not depress the quartic");
        b = {1, 0, out[2], out[1], out[0]};
    }
    return {b[2], b[3], b[4]};
}

/// The curve on the depressed model; throws InputError unless the quartic
/// has degree 4 and is separable.
inline PicardCurve normalize(std::span<const Int> quartic) {
    const auto d = depress(quartic);
    return PicardCurve::from_depressed(d[0], d[1], d[2]);
}

inline Reduction classify_prime(const PicardCurve& curve, u64 p) {
    if (p == 2 || p == 3) return Reduction::bad;
    if (mod_floor(curve.disc(), p) == 0) return Reduction::bad;
    return p % 3 == 1 ? Reduction::split : Reduction::inert;
}

}  // namespace picard
