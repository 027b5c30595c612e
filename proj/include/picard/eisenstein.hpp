#pragma once

// Exact arithmetic in Z[w], w a primitive cube root of unity (w^2 = -1 - w),
// in the coordinate basis {1, w}.

#include <array>
#include <optional>
#include <ostream>
#include <utility>

#include "picard/errors.hpp"
#include "picard/ff/modular.hpp"
#include "picard/int128.hpp"

namespace picard {

struct EisensteinInt {
    Int a = 0;  // rational part
    Int b = 0;  // coefficient of w

    constexpr EisensteinInt() = default;
    constexpr EisensteinInt(Int a_, Int b_ = 0) : a(a_), b(b_) {}

    static constexpr EisensteinInt omega() { return {0, 1}; }

    bool is_zero() const noexcept { return a == 0 && b == 0; }
    bool is_rational() const noexcept { return b == 0; }

    friend bool operator==(const EisensteinInt&, const EisensteinInt&) = default;

    friend EisensteinInt operator+(const EisensteinInt& x, const EisensteinInt& y) {
        return {checked_add(x.a, y.a), checked_add(x.b, y.b)};
    }
    friend EisensteinInt operator-(const EisensteinInt& x, const EisensteinInt& y) {
        return {checked_sub(x.a, y.a), checked_sub(x.b, y.b)};
    }
    friend EisensteinInt operator-(const EisensteinInt& x) { return {checked_sub(0, x.a), checked_sub(0, x.b)}; }

    // (a + bw)(c + dw) = (ac - bd) + (ad + bc - bd) w
    friend EisensteinInt operator*(const EisensteinInt& x, const EisensteinInt& y) {
        const Int ac = checked_mul(x.a, y.a);
        const Int bd = checked_mul(x.b, y.b);
        const Int ad = checked_mul(x.a, y.b);
        const Int bc = checked_mul(x.b, y.a);
        return {checked_sub(ac, bd), checked_sub(checked_add(ad, bc), bd)};
    }

    EisensteinInt& operator+=(const EisensteinInt& o) { return *this = *this + o; }
    EisensteinInt& operator-=(const EisensteinInt& o) { return *this = *this - o; }
    EisensteinInt& operator*=(const EisensteinInt& o) { return *this = *this * o; }

    friend std::ostream& operator<<(std::ostream& os, const EisensteinInt& x) {
        return os << '(' << to_string(x.a) << (x.b < 0 ? " - " : " + ") << to_string(x.b < 0 ? -x.b : x.b) << "w)";
    }
};

/// a^2 - ab + b^2.
inline Int norm(const EisensteinInt& x) {
    return checked_add(checked_sub(checked_mul(x.a, x.a), checked_mul(x.a, x.b)), checked_mul(x.b, x.b));
}

/// Image under w -> w^2 = -1 - w.
inline EisensteinInt conj(const EisensteinInt& x) { return {checked_sub(x.a, x.b), checked_sub(0, x.b)}; }

namespace detail {

/// Nearest integer to num/den (den > 0), ties toward negative infinity.
inline Int round_nearest(Int num, Int den) {
    // ceil((2 num - den) / (2 den))
    const Int n2 = checked_sub(checked_mul(num, 2), den);
    const Int d2 = checked_mul(den, 2);
    return -floor_div(-n2, d2);
}

}  // namespace detail

/// Euclidean division x = q y + r with norm(r) < norm(y); y != 0.
inline std::pair<EisensteinInt, EisensteinInt> divmod(const EisensteinInt& x, const EisensteinInt& y) {
    const Int n = norm(y);
    if (n == 0) throw PreconditionError("Eisenstein division by zero");
    const EisensteinInt num = x * conj(y);
    const EisensteinInt q{detail::round_nearest(num.a, n), detail::round_nearest(num.b, n)};
    const EisensteinInt r = x - q * y;
    if (norm(r) >= n) throw InternalError("Eisenstein remainder did not shrink");
    return {q, r};
}

/// Exact quotient x / y if y divides x.
inline std::optional<EisensteinInt> exact_div(const EisensteinInt& x, const EisensteinInt& y) {
    const Int n = norm(y);
    if (n == 0) throw PreconditionError("Eisenstein division by zero");
    const EisensteinInt num = x * conj(y);
    if (num.a % n != 0 || num.b % n != 0) return std::nullopt;
    return EisensteinInt{num.a / n, num.b / n};
}

inline bool divides(const EisensteinInt& d, const EisensteinInt& x) {
    if (d.is_zero()) return x.is_zero();
    return exact_div(x, d).has_value();
}

/// A greatest common divisor (defined up to the six units; not normalized).
inline EisensteinInt euclidean_gcd(EisensteinInt x, EisensteinInt y) {
    if (x.is_zero() && y.is_zero()) throw PreconditionError("gcd(0, 0) is undefined");
    while (!y.is_zero()) {
        EisensteinInt r = divmod(x, y).second;
        x = y;
        y = r;
    }
    return x;
}

/// One of the six units of Z[w].
class SixthRoot {
public:
    /// The units indexed by k: (-w^2)^k, i.e. 1, -w^2, w, -1, w^2, -w.
    static SixthRoot from_index(int k) {
        static constexpr std::array<EisensteinInt, 6> kUnits = {
            EisensteinInt{1, 0}, EisensteinInt{1, 1}, EisensteinInt{0, 1},
            EisensteinInt{-1, 0}, EisensteinInt{-1, -1}, EisensteinInt{0, -1},
        };
        if (k < 0 || k >= 6) throw PreconditionError("sixth root index out of range");
        return SixthRoot(kUnits[static_cast<std::size_t>(k)]);
    }

    static std::optional<SixthRoot> from_value(const EisensteinInt& u) {
        if (norm(u) != 1) return std::nullopt;
        return SixthRoot(u);
    }

    const EisensteinInt& value() const noexcept { return value_; }
    friend bool operator==(const SixthRoot&, const SixthRoot&) = default;

private:
    explicit SixthRoot(EisensteinInt v) : value_(v) {}
    EisensteinInt value_;
};

/// Reduction Z[w] -> F_p sending w to the cube root of unity z.
inline ff::FpElement sigma_apply(const EisensteinInt& x, const ff::FpElement& z) {
    const ff::Modulus mod(z.p);
    return {mod.add(mod.reduce(x.a), mod.mul(mod.reduce(x.b), z.value)), z.p};
}

namespace detail {

inline void require_primitive_cube_root(const ff::FpElement& z) {
    const ff::Modulus mod(z.p);
    if (z.value == 1 || mod.pow(z.value, 3) != 1)
        throw PreconditionError("z must be a primitive cube root of unity mod p");
}

}  // namespace detail

/// Generator pi of the prime above p in the kernel of sigma_z:
/// pi = gcd(gamma - w, p) with gamma the lift of z in [1, p].
inline EisensteinInt split_prime(u64 p, const ff::FpElement& z) {
    if (z.p != p) throw PreconditionError("cube root belongs to a different modulus");
    detail::require_primitive_cube_root(z);
    const Int gamma = z.value == 0 ? static_cast<Int>(p) : static_cast<Int>(z.value);
    const EisensteinInt pi = euclidean_gcd(EisensteinInt{gamma, -1}, EisensteinInt{static_cast<Int>(p)});
    if (norm(pi) != static_cast<Int>(p)) throw InternalError("split_prime: gcd has norm != p");
    return pi;
}

}  // namespace picard
