#pragma once

#include <algorithm>
#include <span>
#include <utility>
#include <vector>

#include "picard/errors.hpp"
#include "picard/ff/modular.hpp"

namespace picard::ff {

/// Dense univariate polynomial over F_p, ascending coefficients, kept in
/// canonical form (no trailing zero coefficients; the zero polynomial is
/// the empty sequence).
class PolyFp {
public:
    explicit PolyFp(u64 p) : p_(p) {}

    PolyFp(u64 p, std::vector<u64> coeffs) : p_(p), c_(std::move(coeffs)) {
        for (auto& v : c_) v %= p_;
        trim();
    }

    static PolyFp from_ints(u64 p, std::span<const Int> coeffs) {
        std::vector<u64> c(coeffs.size());
        for (std::size_t i = 0; i < coeffs.size(); ++i) c[i] = mod_floor(coeffs[i], p);
        return PolyFp(p, std::move(c));
    }

    static PolyFp monomial(u64 p, std::size_t degree, u64 coeff = 1) {
        std::vector<u64> c(degree + 1, 0);
        c[degree] = coeff;
        return PolyFp(p, std::move(c));
    }

    u64 p() const noexcept { return p_; }
    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const noexcept { return c_.empty(); }
    const std::vector<u64>& coeffs() const noexcept { return c_; }
    u64 coeff(std::size_t i) const noexcept { return i < c_.size() ? c_[i] : 0; }
    u64 leading() const noexcept { return c_.empty() ? 0 : c_.back(); }

    FpElement eval(u64 x) const {
        const Modulus m(p_);
        u64 acc = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = m.add(m.mul(acc, x % p_), *it);
        return {acc, p_};
    }

    PolyFp derivative() const {
        std::vector<u64> d;
        const Modulus m(p_);
        for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(m.mul(c_[i], i % p_));
        return PolyFp(p_, std::move(d));
    }

    PolyFp monic() const {
        if (is_zero()) return *this;
        const Modulus m(p_);
        const u64 inv = m.inv(leading());
        std::vector<u64> c(c_);
        for (auto& v : c) v = m.mul(v, inv);
        return PolyFp(p_, std::move(c));
    }

    friend bool operator==(const PolyFp&, const PolyFp&) = default;

    friend PolyFp operator+(const PolyFp& a, const PolyFp& b) {
        check(a, b);
        const Modulus m(a.p_);
        std::vector<u64> c(std::max(a.c_.size(), b.c_.size()), 0);
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = m.add(a.coeff(i), b.coeff(i));
        return PolyFp(a.p_, std::move(c));
    }

    friend PolyFp operator-(const PolyFp& a, const PolyFp& b) {
        check(a, b);
        const Modulus m(a.p_);
        std::vector<u64> c(std::max(a.c_.size(), b.c_.size()), 0);
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = m.sub(a.coeff(i), b.coeff(i));
        return PolyFp(a.p_, std::move(c));
    }

    /// Schoolbook product; only used on small degrees.
    friend PolyFp operator*(const PolyFp& a, const PolyFp& b) {
        check(a, b);
        if (a.is_zero() || b.is_zero()) return PolyFp(a.p_);
        const Modulus m(a.p_);
        std::vector<u64> c(a.c_.size() + b.c_.size() - 1, 0);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] = m.add(c[i + j], m.mul(a.c_[i], b.c_[j]));
        }
        return PolyFp(a.p_, std::move(c));
    }

    /// Quotient and remainder of a by a nonzero b.
    static std::pair<PolyFp, PolyFp> divmod(const PolyFp& a, const PolyFp& b) {
        check(a, b);
        if (b.is_zero()) throw PreconditionError("polynomial division by zero");
        const Modulus m(a.p_);
        if (a.degree() < b.degree()) return {PolyFp(a.p_), a};
        std::vector<u64> r(a.c_);
        std::vector<u64> q(a.c_.size() - b.c_.size() + 1, 0);
        const u64 inv_lead = m.inv(b.leading());
        const std::size_t db = b.c_.size() - 1;
        for (std::size_t k = q.size(); k-- > 0;) {
            const u64 coef = m.mul(r[k + db], inv_lead);
            q[k] = coef;
            if (coef == 0) continue;
            for (std::size_t j = 0; j <= db; ++j) r[k + j] = m.sub(r[k + j], m.mul(coef, b.c_[j]));
        }
        r.resize(db);
        return {PolyFp(a.p_, std::move(q)), PolyFp(a.p_, std::move(r))};
    }

    friend PolyFp operator%(const PolyFp& a, const PolyFp& b) { return divmod(a, b).second; }

private:
    static void check(const PolyFp& a, const PolyFp& b) {
        if (a.p_ != b.p_) throw PreconditionError("mixed moduli in F_p[x] arithmetic");
    }
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    u64 p_;
    std::vector<u64> c_;
};

/// Monic greatest common divisor (zero if both inputs are zero).
inline PolyFp gcd(PolyFp a, PolyFp b) {
    while (!b.is_zero()) {
        PolyFp r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

inline PolyFp mul_mod(const PolyFp& a, const PolyFp& b, const PolyFp& g) { return (a * b) % g; }

/// base^exp mod g by binary exponentiation in F_p[x]/(g).
inline PolyFp pow_mod(PolyFp base, u64 exp, const PolyFp& g) {
    PolyFp result = PolyFp::monomial(g.p(), 0) % g;
    base = base % g;
    while (exp != 0) {
        if (exp & 1) result = mul_mod(result, base, g);
        exp >>= 1;
        if (exp != 0) base = mul_mod(base, base, g);
    }
    return result;
}

/// x^(p^k) mod g for k in {1, 2}; g monic of degree >= 1.
inline PolyFp frobenius_power(const PolyFp& g, int k) {
    if (g.degree() < 1 || g.leading() != 1) throw PreconditionError("frobenius_power needs a monic modulus of degree >= 1");
    if (k != 1 && k != 2) throw PreconditionError("frobenius_power supports k = 1 or 2");
    PolyFp r = pow_mod(PolyFp::monomial(g.p(), 1), g.p(), g);
    if (k == 2) r = pow_mod(r, g.p(), g);
    return r;
}

namespace detail {

/// deg gcd(x^(p^k) - x, g) for monic g.
inline int frobenius_gcd_degree(const PolyFp& g, int k) {
    const PolyFp x = PolyFp::monomial(g.p(), 1);
    return gcd(frobenius_power(g, k) - x, g).degree();
}

inline PolyFp make_monic_checked(const PolyFp& g) {
    if (g.degree() < 1) throw PreconditionError("polynomial of degree >= 1 required");
    return g.monic();
}

}  // namespace detail

/// True iff g has a root in F_p, i.e. deg gcd(x^p - x, g) > 0.
inline bool has_rational_root(const PolyFp& g) {
    return detail::frobenius_gcd_degree(detail::make_monic_checked(g), 1) > 0;
}

/// Degrees of the irreducible factors of a squarefree quartic, ascending.
///
/// Determined by r1 = deg gcd(x^p - x, f) (number of linear factors) and
/// r2 = deg gcd(x^(p^2) - x, f) (linear plus twice the quadratic factors).
inline std::vector<int> factor_degree_pattern(const PolyFp& f) {
    if (f.degree() != 4) throw PreconditionError("factor_degree_pattern expects a quartic");
    const PolyFp g = f.monic();
    if (gcd(g, g.derivative()).degree() > 0) throw NotSquarefree("quartic is not squarefree mod p");
    const int r1 = detail::frobenius_gcd_degree(g, 1);
    switch (r1) {
        case 4: return {1, 1, 1, 1};
        case 2: return {1, 1, 2};
        case 1: return {1, 3};
        case 0: break;
        default: throw InternalError("impossible root count for a squarefree quartic");
    }
    const int r2 = detail::frobenius_gcd_degree(g, 2);
    if (r2 == 4) return {2, 2};
    if (r2 == 0) return {4};
    throw InternalError("impossible quadratic factor count for a squarefree quartic");
}

}  // namespace picard::ff
