#pragma once

// Coefficients of f^n over F_p.
//
// Two independent routes:
//   * poly_pow_coeffs: truncated binary powering whose squarings are done by
//     Kronecker substitution into GMP integer multiplication.
//   * PowerCoefficients: the first-order recurrence satisfied by h = g^n,
//     g h' = n g' h, which yields single coefficients in O(index) time.
//
// The recurrence divides by m at step m, so it is only run up to indices
// below p. Coefficients near the top of f^n are taken from the reversed
// polynomial, (x^d f(1/x))^n = x^(dn) f^n(1/x), whose constant term is the
// leading coefficient of f.

#include <gmp.h>

#include <algorithm>
#include <cstring>
#include <span>
#include <vector>

#include "picard/errors.hpp"
#include "picard/ff/modular.hpp"
#include "picard/ff/poly.hpp"

namespace picard::ff {

/// Longest coefficient buffer poly_pow_coeffs will allocate.
inline constexpr std::size_t kMaxPowerLength = std::size_t(1) << 26;

namespace detail {

inline int bit_length(u128 v) {
    int b = 0;
    while (v != 0) {
        ++b;
        v >>= 1;
    }
    return b;
}

/// (a * b) mod x^len over F_p via Kronecker substitution.
inline std::vector<u64> kronecker_mul(const std::vector<u64>& a, const std::vector<u64>& b, std::size_t len,
                                      const Modulus& mod) {
    const std::size_t la = std::min(a.size(), len);
    const std::size_t lb = std::min(b.size(), len);
    std::vector<u64> out(std::min(len, la + lb == 0 ? 0 : la + lb - 1), 0);
    if (la == 0 || lb == 0) return out;

    const u128 pm1 = mod.value() - 1;
    const int bits = 2 * bit_length(pm1) + bit_length(static_cast<u128>(std::min(la, lb))) + 1;
    const std::size_t limbs = static_cast<std::size_t>((bits + GMP_NUMB_BITS - 1) / GMP_NUMB_BITS);
    if (limbs > 2) throw CapacityError("coefficient slot exceeds 128 bits");

    auto pack = [limbs](const std::vector<u64>& src, std::size_t n) {
        std::vector<mp_limb_t> buf(n * limbs, 0);
        for (std::size_t i = 0; i < n; ++i) buf[i * limbs] = static_cast<mp_limb_t>(src[i]);
        return buf;
    };
    const auto pa = pack(a, la);
    const auto pb = pack(b, lb);

    mpz_t za, zb, zr;
    mpz_roinit_n(za, pa.data(), static_cast<mp_size_t>(pa.size()));
    mpz_roinit_n(zb, pb.data(), static_cast<mp_size_t>(pb.size()));
    mpz_init(zr);
    if (&a == &b)
        mpz_mul(zr, za, za);
    else
        mpz_mul(zr, za, zb);

    const mp_limb_t* r = mpz_limbs_read(zr);
    const std::size_t rn = mpz_size(zr);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const std::size_t base = i * limbs;
        u128 v = 0;
        if (base < rn) v = r[base];
        if (limbs == 2 && base + 1 < rn) v |= static_cast<u128>(r[base + 1]) << 64;
        out[i] = static_cast<u64>(v % mod.value());
    }
    mpz_clear(zr);
    return out;
}

/// (a * f) mod x^len for a short f, directly.
inline std::vector<u64> mul_short(const std::vector<u64>& a, const std::vector<u64>& f, std::size_t len,
                                  const Modulus& mod) {
    if (a.empty() || f.empty()) return {};
    std::vector<u64> out(std::min(len, a.size() + f.size() - 1), 0);
    for (std::size_t j = 0; j < f.size(); ++j) {
        if (f[j] == 0) continue;
        for (std::size_t i = 0; i < a.size() && i + j < out.size(); ++i)
            out[i + j] = mod.add(out[i + j], mod.mul(a[i], f[j]));
    }
    return out;
}

}  // namespace detail

/// Coefficients of x^0 .. x^max_index of f^n over F_p.
inline std::vector<u64> poly_pow_coeffs(const PolyFp& f, u64 n, std::size_t max_index) {
    if (max_index >= kMaxPowerLength) throw CapacityError("power coefficient buffer too large");
    const Modulus mod(f.p());
    const std::size_t len = max_index + 1;
    std::vector<u64> result{mod.reduce(u64(1))};
    if (n != 0) {
        const auto& fc = f.coeffs();
        auto times_f = [&](const std::vector<u64>& a) {
            return fc.size() <= 16 ? detail::mul_short(a, fc, len, mod) : detail::kronecker_mul(a, fc, len, mod);
        };
        result = times_f(result);
        for (int bit = 62 - __builtin_clzll(n); bit >= 0; --bit) {
            result = detail::kronecker_mul(result, result, len, mod);
            if ((n >> bit) & 1) result = times_f(result);
        }
    }
    result.resize(len, 0);
    return result;
}

namespace detail {

/// Coefficients of g^n at indices [k_lo, k_hi] for g(0) != 0 and k_hi < p,
/// by the scaled recurrence.
///
/// With h = g^n, every m >= 1 satisfies
///     sum_i g_i (m - (n+1) i) h_{m-i} = 0.
/// Writing H_m = h_m * m! * g0^m removes the division:
///     H_m = sum_{i>=1} P_i(m) H_{m-i},
///     P_i(m) = -g_i g0^(i-1) (m - (n+1) i) (m-1)(m-2)...(m-i+1),
/// and each P_i (degree i in m) is stepped by forward differences.
inline constexpr std::size_t kMaxRecurrenceDegree = 4;

inline std::vector<u64> recurrence_window(std::span<const u64> g, u64 n, u64 k_lo, u64 k_hi, const Modulus& mod) {
    const u64 p = mod.value();
    if (g.empty() || g[0] == 0) throw PreconditionError("recurrence needs a nonzero constant term");
    if (g.size() - 1 > kMaxRecurrenceDegree) throw PreconditionError("recurrence is limited to degree 4");
    if (k_hi >= p) throw PreconditionError("recurrence index must stay below p");
    const std::size_t d = g.size() - 1;
    const u64 g0 = g[0];
    const u64 n1 = (n + 1) % p;

    struct Term {
        std::size_t shift;
        std::array<u64, kMaxRecurrenceDegree + 1> diffs;  // forward differences of P_i at the current m
    };
    std::array<Term, kMaxRecurrenceDegree> terms{};
    std::size_t nterms = 0;
    for (std::size_t i = 1; i <= d; ++i) {
        if (g[i] == 0) continue;
        const u64 scale = mod.neg(mod.mul(g[i], mod.pow(g0, i - 1)));
        auto eval = [&](u64 m) {
            u64 v = mod.mul(scale, mod.sub(m % p, mod.mul(n1, i % p)));
            for (std::size_t t = 1; t < i; ++t) v = mod.mul(v, mod.sub(m % p, t % p));
            return v;
        };
        Term& term = terms[nterms++];
        term.shift = i;
        auto& diffs = term.diffs;
        for (std::size_t k = 0; k <= i; ++k) diffs[k] = eval(1 + k);
        for (std::size_t level = 1; level <= i; ++level)
            for (std::size_t k = i; k >= level; --k) diffs[k] = mod.sub(diffs[k], diffs[k - 1]);
    }

    // Ring buffer of the last d+1 scaled coefficients; index m lives at m & mask.
    std::size_t ring = 1;
    while (ring < d + 1) ring <<= 1;
    const std::size_t mask = ring - 1;
    std::vector<u64> H(ring, 0);
    H[0] = mod.pow(g0, n);

    std::vector<u64> window(k_hi - k_lo + 1, 0);
    if (k_lo == 0) window[0] = H[0];
    u64 dm = 1;   // m! g0^m
    u64 mg0 = 0;  // m g0
    for (u64 m = 1; m <= k_hi; ++m) {
        u64 acc = 0;
        for (std::size_t j = 0; j < nterms; ++j) {
            Term& t = terms[j];
            if (t.shift <= m) acc = mod.add(acc, mod.mul(t.diffs[0], H[(m - t.shift) & mask]));
            for (std::size_t k = 0; k < t.shift; ++k) t.diffs[k] = mod.add(t.diffs[k], t.diffs[k + 1]);
        }
        H[m & mask] = acc;
        mg0 = mod.add(mg0, g0);
        dm = mod.mul(dm, mg0);
        if (m >= k_lo) window[m - k_lo] = acc;
    }

    // Unscale from the top: 1/D_{m-1} = m g0 / D_m.
    u64 inv_d = mod.inv(dm);
    for (u64 m = k_hi + 1; m-- > k_lo;) {
        window[m - k_lo] = mod.mul(window[m - k_lo], inv_d);
        if (m > 0) inv_d = mod.mul(inv_d, mod.mul(m % p, g0));
    }
    return window;
}

}  // namespace detail

/// Selected coefficients of f^n over F_p via the recurrence, falling back to
/// truncated powering for an index neither recurrence direction can reach.
class PowerCoefficients {
public:
    PowerCoefficients(const PolyFp& f, u64 n) : f_(f), n_(n), mod_(f.p()) {
        if (f.is_zero()) throw PreconditionError("power of the zero polynomial");
        const auto& c = f.coeffs();
        while (c[valuation_] == 0) ++valuation_;
        low_.assign(c.begin() + static_cast<std::ptrdiff_t>(valuation_), c.end());
        high_.assign(c.rbegin(), c.rend());
        high_.resize(c.size() - valuation_);
    }

    /// Degree of f^n.
    u64 degree() const noexcept { return static_cast<u64>(f_.degree()) * n_; }

    /// Coefficients of x^idx for each requested index (any order).
    std::vector<u64> at(std::span<const u64> indices) const {
        const u64 p = mod_.value();
        const u64 shift = valuation_ * n_;
        std::vector<u64> out(indices.size(), 0);
        std::vector<std::size_t> low, high, fallback;
        for (std::size_t k = 0; k < indices.size(); ++k) {
            const u64 idx = indices[k];
            if (idx < shift || idx > degree()) continue;  // outside the support
            const bool small = low_.size() - 1 <= detail::kMaxRecurrenceDegree;
            const bool low_ok = small && idx - shift < p;
            const bool high_ok = small && degree() - idx < p;
            if (low_ok && (!high_ok || idx - shift <= degree() - idx))
                low.push_back(k);
            else if (high_ok)
                high.push_back(k);
            else
                fallback.push_back(k);
        }
        fill(out, indices, low, low_, [&](u64 idx) { return idx - shift; });
        fill(out, indices, high, high_, [&](u64 idx) { return degree() - idx; });
        if (!fallback.empty()) {
            u64 top = 0;
            for (auto k : fallback) top = std::max(top, indices[k]);
            const auto all = poly_pow_coeffs(f_, n_, static_cast<std::size_t>(top));
            for (auto k : fallback) out[k] = all[indices[k]];
        }
        return out;
    }

    u64 at(u64 index) const {
        const u64 one[1] = {index};
        return at(std::span<const u64>(one, 1))[0];
    }

private:
    template <class Map>
    void fill(std::vector<u64>& out, std::span<const u64> indices, const std::vector<std::size_t>& which,
              const std::vector<u64>& g, Map&& map) const {
        if (which.empty()) return;
        u64 lo = ~u64(0), hi = 0;
        for (auto k : which) {
            lo = std::min(lo, map(indices[k]));
            hi = std::max(hi, map(indices[k]));
        }
        const auto window = detail::recurrence_window(g, n_, lo, hi, mod_);
        for (auto k : which) out[k] = window[map(indices[k]) - lo];
    }

    PolyFp f_;
    u64 n_;
    Modulus mod_;
    std::size_t valuation_ = 0;
    std::vector<u64> low_;   // f / x^valuation
    std::vector<u64> high_;  // x^deg f(1/x), constant term = leading coefficient
};

}  // namespace picard::ff
