#pragma once

// Point counting by enumeration, used as ground truth.
//
// Two layers:
//   * count_points enumerates F_q for q = p^k (k <= 3) and counts cube
//     roots either with the power test u^((q-1)/3) or with a table of all
//     cubes. It is slow and simple.
//   * oracle_lpolynomial gets the full L-polynomial without enumerating
//     F_(p^3). With a cubic character chi of F_(p^2) and
//     S(k) = sum_x chi(f(x)), #C(F_q) = 1 + q + S + conj(S). At a split
//     prime the eigenvalues of Frobenius on the chi-part have power sums
//     -S_1, -S_2 (chi restricted to F_p, resp. chi on F_(p^2)), which gives
//     a and b of 1 - aT + bT^2 - cT^3, and c follows from p b = c conj(a).
//     At an inert prime #C(F_p) = p + 1 and #C(F_(p^3)) = p^3 + 1.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "picard/curve_model.hpp"
#include "picard/eisenstein.hpp"
#include "picard/errors.hpp"
#include "picard/ff/modular.hpp"
#include "picard/lifting.hpp"

namespace picard {

/// Default largest field size the oracle will enumerate.
inline constexpr u64 kDefaultEnumerationBound = u64(1) << 32;

/// F_(p^k), k in {1, 2, 3}, as F_p[x] modulo the first monic irreducible
/// found by an ascending scan (c0 varies fastest). Elements are coefficient
/// triples; unused slots are zero.
class ExtField {
public:
    using Elem = std::array<u64, 3>;

    ExtField(u64 p, int k) : mod_(p), k_(k) {
        if (k < 1 || k > 3) throw PreconditionError("extension degree must be 1, 2 or 3");
        size_ = 1;
        for (int i = 0; i < k; ++i) size_ = checked_mul_u64(size_, p);
        if (k == 1) {
            modulus_ = {0, 0, 0};
            return;
        }
        // A polynomial of degree 2 or 3 is irreducible iff it has no root.
        const u64 count = k == 2 ? p * p : p * p * p;
        for (u64 idx = 0; idx < count; ++idx) {
            Elem c{idx % p, (idx / p) % p, k == 3 ? idx / (p * p) : 0};
            bool root = false;
            for (u64 x = 0; x < p && !root; ++x) {
                u64 v = 1;  // Horner on x^k + c_(k-1) x^(k-1) + ... + c_0
                for (int i = k - 1; i >= 0; --i) v = mod_.add(mod_.mul(v, x), c[static_cast<std::size_t>(i)]);
                root = v == 0;
            }
            if (!root) {
                modulus_ = c;
                return;
            }
        }
        throw InternalError("no irreducible polynomial found");
    }

    u64 p() const noexcept { return mod_.value(); }
    int degree() const noexcept { return k_; }
    u64 size() const noexcept { return size_; }
    /// Lower coefficients of the monic defining polynomial.
    const Elem& modulus() const noexcept { return modulus_; }
    const ff::Modulus& base() const noexcept { return mod_; }

    Elem from_index(u64 idx) const {
        const u64 p = mod_.value();
        Elem e{0, 0, 0};
        for (int i = 0; i < k_; ++i) {
            e[static_cast<std::size_t>(i)] = idx % p;
            idx /= p;
        }
        return e;
    }

    u64 index(const Elem& e) const {
        const u64 p = mod_.value();
        u64 idx = 0;
        for (int i = k_ - 1; i >= 0; --i) idx = idx * p + e[static_cast<std::size_t>(i)];
        return idx;
    }

    Elem constant(Int c) const { return {mod_.reduce(c), 0, 0}; }

    Elem add(const Elem& a, const Elem& b) const {
        return {mod_.add(a[0], b[0]), mod_.add(a[1], b[1]), mod_.add(a[2], b[2])};
    }

    Elem mul(const Elem& a, const Elem& b) const {
        std::array<u64, 5> t{};
        for (int i = 0; i < k_; ++i)
            for (int j = 0; j < k_; ++j)
                t[static_cast<std::size_t>(i + j)] = mod_.add(t[static_cast<std::size_t>(i + j)], mod_.mul(a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(j)]));
        // x^k = -(c_0 + c_1 x + ...)
        for (int d = 2 * k_ - 2; d >= k_; --d) {
            const u64 v = t[static_cast<std::size_t>(d)];
            if (v == 0) continue;
            t[static_cast<std::size_t>(d)] = 0;
            for (int i = 0; i < k_; ++i) {
                const std::size_t at = static_cast<std::size_t>(d - k_ + i);
                t[at] = mod_.sub(t[at], mod_.mul(v, modulus_[static_cast<std::size_t>(i)]));
            }
        }
        return {t[0], t[1], t[2]};
    }

    Elem pow(Elem base, u64 e) const {
        Elem r = constant(1);
        while (e != 0) {
            if (e & 1) r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }

    bool is_zero(const Elem& e) const { return e[0] == 0 && e[1] == 0 && e[2] == 0; }
    bool is_one(const Elem& e) const { return e[0] == 1 && e[1] == 0 && e[2] == 0; }

private:
    static u64 checked_mul_u64(u64 a, u64 b) {
        u64 r;
        if (__builtin_mul_overflow(a, b, &r)) throw CapacityError("field size overflows 64 bits");
        return r;
    }

    ff::Modulus mod_;
    int k_;
    u64 size_ = 0;
    Elem modulus_{};
};

enum class CubeCount { power_test, cube_table };

/// #C(F_(p^k)) = 1 + sum_x #{y : y^3 = f(x)}, by full enumeration.
inline Int count_points(const PicardCurve& curve, u64 p, int k, CubeCount method = CubeCount::power_test,
                        u64 bound = kDefaultEnumerationBound) {
    if (classify_prime(curve, p) == Reduction::bad) throw PreconditionError("count_points needs a good prime");
    u64 q = 1;
    for (int i = 0; i < k; ++i) {
        if (q > bound / p) throw CapacityError("p^k = " + std::to_string(p) + "^" + std::to_string(k) + " exceeds the enumeration bound");
        q *= p;
    }
    const ExtField F(p, k);
    const auto f2 = F.constant(curve.f2()), f1 = F.constant(curve.f1()), f0 = F.constant(curve.f0());
    auto eval = [&](const ExtField::Elem& x) {
        const auto x2 = F.mul(x, x);
        return F.add(F.add(F.mul(x2, F.add(x2, f2)), F.mul(f1, x)), f0);
    };

    std::vector<std::uint8_t> cubes;
    if (method == CubeCount::cube_table) {
        cubes.assign(q, 0);
        for (u64 i = 0; i < q; ++i) {
            const auto y = F.from_index(i);
            ++cubes[F.index(F.mul(F.mul(y, y), y))];
        }
    }
    const bool cube_map_bijective = q % 3 == 2;
    Int total = 1;  // the point at infinity
    if (k == 1 && method == CubeCount::power_test) {
        // Same test on bare residues, without the extension-field wrapper.
        const ff::Modulus& m = F.base();
        const u64 a2 = m.reduce(curve.f2()), a1 = m.reduce(curve.f1()), a0 = m.reduce(curve.f0());
        for (u64 x = 0; x < q; ++x) {
            const u64 x2 = m.mul(x, x);
            const u64 u = m.add(m.add(m.mul(x2, m.add(x2, a2)), m.mul(a1, x)), a0);
            if (u == 0 || cube_map_bijective)
                total += 1;
            else
                total += m.pow(u, (q - 1) / 3) == 1 ? 3 : 0;
        }
        return total;
    }
    for (u64 i = 0; i < q; ++i) {
        const auto u = eval(F.from_index(i));
        if (method == CubeCount::cube_table) {
            total += cubes[F.index(u)];
        } else if (F.is_zero(u) || cube_map_bijective) {
            total += 1;
        } else {
            total += F.is_one(F.pow(u, (q - 1) / 3)) ? 3 : 0;
        }
    }
    return total;
}

/// L(T) from #C(F_p), #C(F_(p^2)), #C(F_(p^3)) via Newton's identities and
/// the functional equation.
inline LPolynomial lpoly_from_counts(Int N1, Int N2, Int N3, u64 p) {
    const Int P = static_cast<Int>(p);
    const Int s1 = checked_sub(checked_add(P, 1), N1);
    const Int s2 = checked_sub(checked_add(checked_mul(P, P), 1), N2);
    const Int s3 = checked_sub(checked_add(checked_mul(P, checked_mul(P, P)), 1), N3);
    const Int e1 = s1;
    const Int e2x2 = checked_sub(checked_mul(s1, s1), s2);
    if (e2x2 % 2 != 0) throw DivisionFailure("Newton identity: e2 is not integral");
    const Int e2 = e2x2 / 2;
    const Int e3x6 = checked_add(checked_sub(checked_mul(s1, checked_mul(s1, s1)), checked_mul(3, checked_mul(s1, s2))),
                                 checked_mul(2, s3));
    if (e3x6 % 6 != 0) throw DivisionFailure("Newton identity: e3 is not integral");
    const Int e3 = e3x6 / 6;
    LPolynomial L{{1, -e1, e2, -e3, checked_mul(P, e2), checked_mul(-checked_mul(P, P), e1),
                   checked_mul(P, checked_mul(P, P))}};
    if (!L.satisfies_functional_equation(p)) throw InternalError("reconstructed L-polynomial fails the functional equation");
    return L;
}

namespace detail {

/// A generator of F_(p^2)^*: checked against every prime divisor of p^2 - 1.
inline ExtField::Elem field_generator(const ExtField& F) {
    const u64 order = F.size() - 1;
    std::vector<u64> primes;
    u64 m = order;
    for (u64 d = 2; d * d <= m; ++d) {
        if (m % d != 0) continue;
        primes.push_back(d);
        while (m % d == 0) m /= d;
    }
    if (m > 1) primes.push_back(m);
    for (u64 idx = 2; idx < F.size(); ++idx) {
        const auto g = F.from_index(idx);
        bool ok = true;
        for (u64 r : primes)
            if (F.is_one(F.pow(g, order / r))) {
                ok = false;
                break;
            }
        if (ok) return g;
    }
    throw InternalError("no generator found");
}

/// chi(G^j) = w^(j mod 3) on F_(p^2), stored as j mod 3 per element index
/// (kZero for 0).
struct CubicCharacter {
    static constexpr std::uint8_t kZero = 3;
    std::vector<std::uint8_t> ind;

    explicit CubicCharacter(const ExtField& F) : ind(F.size(), kZero) {
        const auto g = field_generator(F);
        auto x = F.constant(1);
        std::uint8_t j = 0;
        for (u64 i = 0; i + 1 < F.size(); ++i) {
            ind[F.index(x)] = j;
            j = static_cast<std::uint8_t>(j == 2 ? 0 : j + 1);
            x = F.mul(x, g);
        }
    }
};

inline EisensteinInt character_sum(const std::array<Int, 4>& counts) {
    // counts[j] = #{x : chi(f(x)) = w^j}; w^2 = -1 - w.
    return {counts[0] - counts[2], counts[1] - counts[2]};
}

}  // namespace detail

struct OracleResult {
    std::array<Int, 3> counts{};          // #C(F_p), #C(F_(p^2)), #C(F_(p^3))
    LPolynomial L;
    std::optional<SplitLocalPoly> local;  // a', b', c' at split primes
};

/// Independent L-polynomial from character sums (see the header comment).
/// Needs p^2 <= bound; a split prime with a' = 0 additionally enumerates
/// F_(p^3) and so needs p^3 <= bound.
inline OracleResult oracle_lpolynomial(const PicardCurve& curve, u64 p, u64 bound = kDefaultEnumerationBound) {
    const Reduction red = classify_prime(curve, p);
    if (red == Reduction::bad) throw PreconditionError("oracle needs a good prime");
    if (p > bound / p) throw CapacityError("p^2 exceeds the enumeration bound at p = " + std::to_string(p));
    const Int P = static_cast<Int>(p);
    const ExtField F(p, 2);
    const detail::CubicCharacter chi(F);
    const ff::Modulus& mod = F.base();

    // Enumerate x = x0 + x1 alpha row by row: along a row f(x) is a quartic
    // in x0, stepped with forward differences.
    std::array<Int, 4> counts2{}, counts1{};
    std::array<ExtField::Elem, 5> diff;
    const auto f2 = F.constant(curve.f2()), f1 = F.constant(curve.f1()), f0 = F.constant(curve.f0());
    auto eval = [&](const ExtField::Elem& x) {
        const auto x2 = F.mul(x, x);
        return F.add(F.add(F.mul(x2, F.add(x2, f2)), F.mul(f1, x)), f0);
    };
    for (u64 x1 = 0; x1 < p; ++x1) {
        std::array<ExtField::Elem, 5> vals;
        for (u64 t = 0; t < 5; ++t) vals[t] = eval({t % p, x1, 0});
        for (std::size_t level = 1; level < 5; ++level)
            for (std::size_t t = 4; t >= level; --t)
                for (int c = 0; c < 2; ++c) vals[t][static_cast<std::size_t>(c)] = mod.sub(vals[t][static_cast<std::size_t>(c)], vals[t - 1][static_cast<std::size_t>(c)]);
        diff = vals;
        for (u64 x0 = 0; x0 < p; ++x0) {
            const std::uint8_t j = chi.ind[diff[0][0] + diff[0][1] * p];
            ++counts2[j];
            if (x1 == 0) ++counts1[j];
            for (std::size_t t = 0; t < 4; ++t) diff[t] = F.add(diff[t], diff[t + 1]);
        }
    }

    OracleResult r;
    const EisensteinInt S2 = detail::character_sum(counts2);
    r.counts[1] = 1 + P * P + 2 * S2.a - S2.b;  // S + conj(S) = 2a - b
    if (red == Reduction::inert) {
        r.counts[0] = P + 1;
        r.counts[2] = checked_add(checked_mul(P, checked_mul(P, P)), 1);
        r.L = lpoly_from_counts(r.counts[0], r.counts[1], r.counts[2], p);
        return r;
    }

    // chi restricted to F_p is chi_1 o N with N(x) = x^2, i.e. conj(chi_1);
    // the chi_2 = chi_1 o N_(F_(p^2)/F_p) pairing needs chi_1 itself.
    const EisensteinInt S1 = conj(detail::character_sum(counts1));
    r.counts[0] = 1 + P + 2 * S1.a - S1.b;
    const EisensteinInt a = -S1;
    const EisensteinInt b2 = S1 * S1 + S2;
    if (b2.a % 2 != 0 || b2.b % 2 != 0) throw DivisionFailure("character sums give a non-integral b");
    const EisensteinInt b{b2.a / 2, b2.b / 2};
    EisensteinInt c;
    if (!a.is_zero()) {
        const auto q = exact_div(b * EisensteinInt{P}, conj(a));
        if (!q) throw DivisionFailure("conj(a) does not divide p b at p = " + std::to_string(p));
        c = *q;
        // Sum of cubes of all six eigenvalues: P3 + conj(P3), P3 = e1^3 - 3 e1 e2 + 3 e3.
        const EisensteinInt P3 = a * a * a - EisensteinInt{3} * a * b + EisensteinInt{3} * c;
        r.counts[2] = checked_add(checked_mul(P, checked_mul(P, P)), 1) - (2 * P3.a - P3.b);
    } else {
        r.counts[2] = count_points(curve, p, 3, CubeCount::power_test, bound);
        // With a = 0, L_sigma = 1 + b T^2 - c T^3 and b = 0 by p b = c conj(a).
        const Int trace_c = checked_sub(checked_add(checked_mul(P, checked_mul(P, P)), 1), r.counts[2]);
        // P3 = 3c, so -(P3 + conj P3) = -3 (c + conj c) = s3; c + conj(c) = 2 c.a - c.b.
        if (trace_c % 3 != 0) throw DivisionFailure("inconsistent cubic count with a = 0");
        // c is fixed up to conjugation by its trace and norm p^3; the
        // L-polynomial only depends on that pair.
        const Int tr = trace_c / 3;
        const Int nrm = checked_mul(P, checked_mul(P, P));
        // Solve 2x - y = tr, x^2 - xy + y^2 = nrm: 3y^2 = 4 nrm - tr^2.
        const Int disc = checked_sub(checked_mul(4, nrm), checked_mul(tr, tr));
        if (disc < 0 || disc % 3 != 0) throw DivisionFailure("no element of norm p^3 with this trace");
        Int y = 0;
        {
            const Int y2 = disc / 3;
            Int lo = 0, hi = 1;
            while (hi * hi <= y2) hi *= 2;
            while (lo < hi) {
                const Int mid = (lo + hi + 1) / 2;
                if (mid * mid <= y2) lo = mid; else hi = mid - 1;
            }
            if (lo * lo != y2) throw DivisionFailure("no element of norm p^3 with this trace");
            y = lo;
        }
        if ((tr + y) % 2 != 0) throw DivisionFailure("no element of norm p^3 with this trace");
        c = EisensteinInt{(tr + y) / 2, y};
    }
    r.local = SplitLocalPoly{a, b, c};
    r.L = lpoly_from_counts(r.counts[0], r.counts[1], r.counts[2], p);
    if (expand_split(*r.local) != r.L) throw InternalError("oracle: local factors disagree with the counts at p = " + std::to_string(p));
    return r;
}

}  // namespace picard
