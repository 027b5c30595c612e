#pragma once

// From Cartier-Manin data mod p to the exact L-polynomial.
//
// Split p: L(T) = L_sigma(T) * conj(L_sigma(T)) with
// L_sigma(T) = 1 - a T + b T^2 - c T^3 over Z[w]. The trace of the sigma
// block and the sigma-bar entry pin down a mod p in both embeddings, and
// the Weil bound |a| <= 3 sqrt(p) makes the centered lift unique once
// p >= 53. Then c = zeta * conj(pi) * p and b = zeta * conj(pi) * conj(a)
// for a sixth root of unity zeta read off from the determinant.
//
// Inert p: L(T) = (1 + p T^2)(1 - t T^2 + p^2 T^4) with |t| <= 2p, and t is
// recovered from its residues mod p, mod 2 and mod 3.

#include <array>
#include <ostream>
#include <vector>

#include "picard/cartier_manin.hpp"
#include "picard/curve_model.hpp"
#include "picard/eisenstein.hpp"
#include "picard/errors.hpp"
#include "picard/ff/poly.hpp"
#include "picard/int128.hpp"

namespace picard {

/// 1 + a1 T + ... + a6 T^6 with exact coefficients.
struct LPolynomial {
    std::array<Int, 7> a{};

    Int operator[](std::size_t i) const { return a[i]; }
    friend bool operator==(const LPolynomial&, const LPolynomial&) = default;

    /// Value at an integer point.
    Int evaluate(Int x) const {
        Int acc = 0;
        for (std::size_t i = 7; i-- > 0;) acc = checked_add(checked_mul(acc, x), a[i]);
        return acc;
    }

    /// a0 = 1, a6 = p^3 and a_(6-i) = p^(3-i) a_i.
    bool satisfies_functional_equation(u64 p) const {
        const Int P = static_cast<Int>(p);
        if (a[0] != 1) return false;
        Int pk = 1;
        for (int i = 3; i >= 0; --i) {
            if (a[static_cast<std::size_t>(6 - i)] != checked_mul(pk, a[static_cast<std::size_t>(i)])) return false;
            pk = checked_mul(pk, P);
        }
        return true;
    }

    /// Coefficients reduced modulo m (m >= 2).
    ff::PolyFp reduce(u64 m) const { return ff::PolyFp::from_ints(m, a); }

    friend std::ostream& operator<<(std::ostream& os, const LPolynomial& L) {
        os << '[';
        for (std::size_t i = 0; i < 7; ++i) os << (i ? ", " : "") << to_string(L.a[i]);
        return os << ']';
    }
};

/// Coefficients of L_sigma(T) = 1 - a T + b T^2 - c T^3.
struct SplitLocalPoly {
    EisensteinInt a, b, c;
};

inline Int centered(u64 v, u64 p) {
    return v > p / 2 ? static_cast<Int>(v) - static_cast<Int>(p) : static_cast<Int>(v);
}

/// a = x + y w from x + z y = r_sigma and x + z^2 y = r_sigmabar (mod p),
/// each coordinate lifted to (-p/2, p/2].
inline EisensteinInt lift_a(const ff::FpElement& r_sigma, const ff::FpElement& r_sigmabar, const ff::FpElement& z,
                            u64 p) {
    if (p < 53) throw PreconditionError("the centered lift is only unique for p >= 53");
    if (r_sigma.p != p || r_sigmabar.p != p || z.p != p) throw PreconditionError("residues modulo different primes");
    detail::require_primitive_cube_root(z);
    const ff::FpElement y = (r_sigma - r_sigmabar) / (z - z * z);
    const ff::FpElement x = r_sigma - z * y;
    const Int X = centered(x.value, p), Y = centered(y.value, p);
    const Int bound = checked_mul(12, static_cast<Int>(p));
    if (checked_mul(X, X) > bound || checked_mul(Y, Y) > bound)
        throw WeilBoundViolation("lifted a violates the Weil bound at p = " + std::to_string(p));
    return {X, Y};
}

/// The sixth root of unity zeta with sigma(zeta) = s / (r_bar * sigma(conj(pi))).
inline SixthRoot determine_zeta(const ff::FpElement& s_sigma, const ff::FpElement& r_sigmabar, const EisensteinInt& pi,
                                const ff::FpElement& z) {
    if (r_sigmabar.is_zero()) throw PreconditionError("determine_zeta needs an ordinary prime");
    const ff::FpElement denom = r_sigmabar * sigma_apply(conj(pi), z);
    if (denom.is_zero()) throw PreconditionError("pi lies above the wrong prime for this z");
    const ff::FpElement target = s_sigma / denom;
    for (int k = 0; k < 6; ++k) {
        const SixthRoot u = SixthRoot::from_index(k);
        if (sigma_apply(u.value(), z) == target) return u;
    }
    throw ZetaMatchFailure("no sixth root of unity matches at p = " + std::to_string(z.p));
}

inline SplitLocalPoly split_local_poly(const EisensteinInt& a, const SixthRoot& zeta, const EisensteinInt& pi, u64 p) {
    const EisensteinInt zp = zeta.value() * conj(pi);
    return {a, zp * conj(a), zp * EisensteinInt{static_cast<Int>(p)}};
}

/// (1 - aT + bT^2 - cT^3)(1 - conj(a)T + conj(b)T^2 - conj(c)T^3).
inline LPolynomial expand_split(const SplitLocalPoly& s) {
    const std::array<EisensteinInt, 4> P{EisensteinInt{1}, -s.a, s.b, -s.c};
    std::array<EisensteinInt, 7> prod{};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) prod[i + j] += P[i] * conj(P[j]);
    LPolynomial L;
    for (std::size_t k = 0; k < 7; ++k) {
        if (prod[k].b != 0) throw NonRealProduct("split product has a nonzero w-component");
        L.a[k] = prod[k].a;
    }
    return L;
}

inline LPolynomial assemble_split(const EisensteinInt& a, const SixthRoot& zeta, const EisensteinInt& pi, u64 p) {
    return expand_split(split_local_poly(a, zeta, pi, p));
}

/// Every intermediate of one split lift.
struct SplitLift {
    SplitCMData cm;
    EisensteinInt pi;
    SixthRoot zeta = SixthRoot::from_index(0);
    SplitLocalPoly local;
    LPolynomial L;
};

/// Full split-ordinary lift for p >= 53 with the cube root z bound to the
/// (2p-2)/3 block.
inline SplitLift lift_split(const SplitCMData& cm) {
    const u64 p = cm.p;
    if (!is_ordinary(cm)) throw PreconditionError("prime " + std::to_string(p) + " is not ordinary");
    SplitLift r;
    r.cm = cm;
    const EisensteinInt a = lift_a(cm.trace(), cm.A1, cm.z, p);
    r.pi = split_prime(p, cm.z);
    r.zeta = determine_zeta(cm.det(), cm.A1, r.pi, cm.z);
    r.local = split_local_poly(a, r.zeta, r.pi, p);
    r.L = expand_split(r.local);
    return r;
}

inline SplitLift lift_split(const PicardCurve& curve, u64 p, const ff::FpElement& z,
                            CoeffRoute route = CoeffRoute::recurrence) {
    return lift_split(split_matrices(curve, p, z, route));
}

inline SplitLift lift_split(const PicardCurve& curve, u64 p, CoeffRoute route = CoeffRoute::recurrence) {
    return lift_split(curve, p, ff::find_cube_root_of_unity(p), route);
}

/// 0 if psi_f has a root in F_p, else 1.
inline int inert_t_mod_2(const PicardCurve& curve, u64 p) {
    detail::require_good(curve, p, Reduction::inert);
    return ff::has_rational_root(curve.psi_mod(p)) ? 0 : 1;
}

/// 1 if f is irreducible mod p, else 2.
inline int inert_t_mod_3(const PicardCurve& curve, u64 p) {
    detail::require_good(curve, p, Reduction::inert);
    return ff::factor_degree_pattern(curve.f_mod(p)) == std::vector<int>{4} ? 1 : 2;
}

/// The unique t in [-2p, 2p] with the given residues mod p, 2 and 3.
inline Int crt_lift_t(const ff::FpElement& t_mod_p, int t_mod_2, int t_mod_3, u64 p) {
    if (p <= 3 || t_mod_p.p != p) throw PreconditionError("crt_lift_t needs p > 3");
    if (t_mod_2 < 0 || t_mod_2 > 1 || t_mod_3 < 0 || t_mod_3 > 2) throw PreconditionError("residue out of range");
    const Int P = static_cast<Int>(p);
    Int r = -1;
    for (Int j = 0; j < 6; ++j) {
        const Int t = static_cast<Int>(t_mod_p.value) + j * P;
        if (t % 2 == t_mod_2 && t % 3 == t_mod_3) {
            r = t;
            break;
        }
    }
    if (r < 0) throw InternalError("CRT residue not found");
    for (Int t : {r, r - 6 * P})
        if (-2 * P <= t && t <= 2 * P) return t;
    throw CrtOutOfRange("no lift of t lies in [-2p, 2p] at p = " + std::to_string(p));
}

/// (1 + p T^2)(1 - t T^2 + p^2 T^4).
inline LPolynomial assemble_inert(Int t, u64 p) {
    const Int P = static_cast<Int>(p);
    if (t < -2 * P || t > 2 * P) throw PreconditionError("|t| exceeds 2p");
    return {{1, 0, P - t, 0, checked_mul(P, P - t), 0, checked_mul(P, checked_mul(P, P))}};
}

struct InertLift {
    InertCMData cm;
    int t_mod_2 = 0;
    int t_mod_3 = 0;
    Int t = 0;
    LPolynomial L;
};

inline InertLift lift_inert(const PicardCurve& curve, u64 p, CoeffRoute route = CoeffRoute::recurrence) {
    InertLift r;
    r.cm = inert_matrices(curve, p, route);
    r.t_mod_2 = inert_t_mod_2(curve, p);
    r.t_mod_3 = inert_t_mod_3(curve, p);
    r.t = crt_lift_t(inert_t_mod_p(r.cm), r.t_mod_2, r.t_mod_3, p);
    r.L = assemble_inert(r.t, p);
    return r;
}

/// L_p mod 3 predicted by the factorization pattern {d_i} of f mod p:
///   split: (1-T)^-2 prod (1 - T^d)^2
///   inert: (1-T^2)^-1 prod (1 - T^d)(1 - (2T)^d)
inline ff::PolyFp lpoly_mod3(const PicardCurve& curve, u64 p) {
    const Reduction red = classify_prime(curve, p);
    if (red == Reduction::bad) throw PreconditionError("lpoly_mod3 needs a good prime");
    const auto pattern = ff::factor_degree_pattern(curve.f_mod(p));
    auto one_minus = [](u64 coeff, int d) {
        std::vector<u64> c(static_cast<std::size_t>(d) + 1, 0);
        c[0] = 1;
        c[static_cast<std::size_t>(d)] = (3 - coeff % 3) % 3;
        return ff::PolyFp(3, std::move(c));
    };
    ff::PolyFp num(3, {1});
    ff::PolyFp den(3);
    if (red == Reduction::split) {
        for (int d : pattern) num = num * one_minus(1, d) * one_minus(1, d);
        den = one_minus(1, 1) * one_minus(1, 1);
    } else {
        for (int d : pattern) num = num * one_minus(1, d) * one_minus(d % 2 == 0 ? 1 : 2, d);
        den = one_minus(1, 2);
    }
    auto [q, r] = ff::PolyFp::divmod(num, den);
    if (!r.is_zero()) throw DivisionFailure("mod-3 prefactor does not divide the product");
    return q;
}

}  // namespace picard
