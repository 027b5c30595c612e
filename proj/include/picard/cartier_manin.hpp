#pragma once

// Cartier-Manin data of y^3 = f(x) mod p in the basis of differentials
// x^(i-1) y^(j-3) dx. Every entry is a single coefficient of a power of f,
// so only a handful of coefficients are ever extracted.

#include <array>
#include <vector>

#include "picard/curve_model.hpp"
#include "picard/eisenstein.hpp"
#include "picard/errors.hpp"
#include "picard/ff/modular.hpp"
#include "picard/ff/poly.hpp"
#include "picard/ff/power.hpp"

namespace picard {

/// How coefficients of f^n are extracted. The recurrence is the production
/// route; powering is kept as an independent reference.
enum class CoeffRoute { recurrence, powering };

using Matrix3 = std::array<std::array<u64, 3>, 3>;

struct SplitCMData {
    u64 p = 0;
    std::array<std::array<ff::FpElement, 2>, 2> A2;  // sigma-block, A2[i'-1][i-1]
    ff::FpElement A1;                                 // sigma-bar block
    ff::FpElement z;                                  // cube root of unity bound to sigma

    ff::FpElement trace() const { return A2[0][0] + A2[1][1]; }
    ff::FpElement det() const { return A2[0][0] * A2[1][1] - A2[0][1] * A2[1][0]; }
};

struct InertCMData {
    u64 p = 0;
    ff::FpElement b1, b2;  // from f^((p-2)/3)
    ff::FpElement c1, c2;  // from f^((2p-1)/3)
};

namespace detail {

inline std::vector<u64> power_coeffs(const ff::PolyFp& f, u64 n, std::span<const u64> indices, CoeffRoute route) {
    if (route == CoeffRoute::recurrence) return ff::PowerCoefficients(f, n).at(indices);
    u64 top = 0;
    for (u64 i : indices) top = std::max(top, i);
    const auto all = ff::poly_pow_coeffs(f, n, static_cast<std::size_t>(top));
    std::vector<u64> out;
    for (u64 i : indices) out.push_back(all[i]);
    return out;
}

inline void require_good(const PicardCurve& curve, u64 p, Reduction expected) {
    if (classify_prime(curve, p) != expected)
        throw PreconditionError("prime " + std::to_string(p) + " has the wrong reduction type for this operation");
}

}  // namespace detail

/// A2[i'][i] = coefficient of x^(i'p - i) in f^((2p-2)/3);
/// A1 = coefficient of x^(p-1) in f^((p-1)/3).
inline SplitCMData split_matrices(const PicardCurve& curve, u64 p, const ff::FpElement& z,
                                  CoeffRoute route = CoeffRoute::recurrence) {
    detail::require_good(curve, p, Reduction::split);
    if (z.p != p) throw PreconditionError("cube root belongs to a different modulus");
    detail::require_primitive_cube_root(z);
    const ff::PolyFp f = curve.f_mod(p);
    const u64 n1 = (2 * p - 2) / 3, n2 = (p - 1) / 3;
    const std::array<u64, 4> idx{p - 1, p - 2, 2 * p - 1, 2 * p - 2};
    const auto c1 = detail::power_coeffs(f, n1, idx, route);
    const std::array<u64, 1> idx2{p - 1};
    const auto c2 = detail::power_coeffs(f, n2, idx2, route);

    SplitCMData d;
    d.p = p;
    d.A2[0][0] = {c1[0], p};
    d.A2[0][1] = {c1[1], p};
    d.A2[1][0] = {c1[2], p};
    d.A2[1][1] = {c1[3], p};
    d.A1 = {c2[0], p};
    d.z = z;
    return d;
}

/// Rank 3 of the assembled matrix.
inline bool is_ordinary(const SplitCMData& d) { return !d.det().is_zero() && !d.A1.is_zero(); }

/// b_i = coefficient of x^(p-i) in f^((p-2)/3);
/// c_i' = coefficient of x^(i'p-1) in f^((2p-1)/3).
inline InertCMData inert_matrices(const PicardCurve& curve, u64 p, CoeffRoute route = CoeffRoute::recurrence) {
    detail::require_good(curve, p, Reduction::inert);
    const ff::PolyFp f = curve.f_mod(p);
    const u64 e1 = (p - 2) / 3, e2 = (2 * p - 1) / 3;
    const std::array<u64, 2> ib{p - 1, p - 2};
    const std::array<u64, 2> ic{p - 1, 2 * p - 1};
    const auto b = detail::power_coeffs(f, e1, ib, route);
    const auto c = detail::power_coeffs(f, e2, ic, route);
    InertCMData d;
    d.p = p;
    d.b1 = {b[0], p};
    d.b2 = {b[1], p};
    d.c1 = {c[0], p};
    d.c2 = {c[1], p};
    return d;
}

inline ff::FpElement inert_t_mod_p(const InertCMData& d) { return d.b1 * d.c1 + d.b2 * d.c2; }

inline ff::FpElement inert_t_mod_p(const PicardCurve& curve, u64 p) { return inert_t_mod_p(inert_matrices(curve, p)); }

/// Block-diagonal diag(A2, A1).
inline Matrix3 assemble_matrix(const SplitCMData& d) {
    return {{{d.A2[0][0].value, d.A2[0][1].value, 0},
             {d.A2[1][0].value, d.A2[1][1].value, 0},
             {0, 0, d.A1.value}}};
}

/// The inert operator exchanges the two eigenspaces: [[0, 0, c1], [0, 0, c2], [b1, b2, 0]].
inline Matrix3 assemble_matrix(const InertCMData& d) {
    return {{{0, 0, d.c1.value}, {0, 0, d.c2.value}, {d.b1.value, d.b2.value, 0}}};
}

/// det(1 - M T) over F_p.
inline ff::PolyFp reversed_charpoly(const Matrix3& m, u64 p) {
    const ff::Modulus mod(p);
    auto minor = [&](int i, int j) {
        return mod.sub(mod.mul(m[i][i], m[j][j]), mod.mul(m[i][j], m[j][i]));
    };
    const u64 tr = mod.add(mod.add(m[0][0], m[1][1]), m[2][2]);
    const u64 e2 = mod.add(mod.add(minor(0, 1), minor(0, 2)), minor(1, 2));
    u64 det = mod.mul(m[0][0], mod.sub(mod.mul(m[1][1], m[2][2]), mod.mul(m[1][2], m[2][1])));
    det = mod.sub(det, mod.mul(m[0][1], mod.sub(mod.mul(m[1][0], m[2][2]), mod.mul(m[1][2], m[2][0]))));
    det = mod.add(det, mod.mul(m[0][2], mod.sub(mod.mul(m[1][0], m[2][1]), mod.mul(m[1][1], m[2][0]))));
    return ff::PolyFp(p, {1 % p, mod.neg(tr), e2, mod.neg(det)});
}

inline ff::PolyFp reversed_charpoly_mod_p(const SplitCMData& d) { return reversed_charpoly(assemble_matrix(d), d.p); }

inline ff::PolyFp reversed_charpoly_mod_p(const InertCMData& d) { return reversed_charpoly(assemble_matrix(d), d.p); }

}  // namespace picard
