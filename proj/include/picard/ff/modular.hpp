#pragma once

#include <cstdint>
#include <ostream>

#include "picard/errors.hpp"
#include "picard/int128.hpp"

namespace picard::ff {

/// Largest modulus supported by the residue arithmetic (exclusive).
inline constexpr u64 kMaxModulus = u64(1) << 40;

/// Arithmetic on residues in [0, p) for a fixed modulus p < 2^40.
///
/// Products of two residues are below 2^80 and are reduced exactly through
/// 128-bit arithmetic. Moduli below 2^32 take a Barrett path whose products
/// fit a machine word; that is the path the per-prime inner loops run on.
class Modulus {
public:
    explicit Modulus(u64 p) : p_(p) {
        if (p < 2 || p >= kMaxModulus) throw PreconditionError("modulus out of range [2, 2^40)");
        small_ = p < (u64(1) << 32);
        barrett_ = small_ ? ~u64(0) / p : 0;
    }

    u64 value() const noexcept { return p_; }

    u64 reduce(u64 x) const noexcept {
        if (small_) return barrett(x);
        return x % p_;
    }

    u64 reduce(Int x) const noexcept { return mod_floor(x, p_); }

    u64 add(u64 a, u64 b) const noexcept {
        const u64 s = a + b;
        return s >= p_ ? s - p_ : s;
    }

    u64 sub(u64 a, u64 b) const noexcept { return a >= b ? a - b : a + p_ - b; }

    u64 neg(u64 a) const noexcept { return a == 0 ? 0 : p_ - a; }

    u64 mul(u64 a, u64 b) const noexcept {
        if (small_) return barrett(a * b);
        return static_cast<u64>(static_cast<u128>(a) * b % p_);
    }

    u64 pow(u64 base, u64 exp) const noexcept {
        u64 result = reduce(u64(1));
        base = reduce(base);
        while (exp != 0) {
            if (exp & 1) result = mul(result, base);
            base = mul(base, base);
            exp >>= 1;
        }
        return result;
    }

    /// Inverse of a nonzero residue (p prime), by the extended Euclidean algorithm.
    u64 inv(u64 a) const {
        a = reduce(a);
        if (a == 0) throw PreconditionError("inverse of zero");
        Int r0 = static_cast<Int>(p_), r1 = static_cast<Int>(a);
        Int s0 = 0, s1 = 1;
        while (r1 != 0) {
            const Int q = r0 / r1;
            Int t = r0 - q * r1;
            r0 = r1;
            r1 = t;
            t = s0 - q * s1;
            s0 = s1;
            s1 = t;
        }
        if (r0 != 1) throw PreconditionError("residue not invertible");
        return mod_floor(s0, p_);
    }

    friend bool operator==(const Modulus& a, const Modulus& b) noexcept { return a.p_ == b.p_; }

private:
    u64 barrett(u64 x) const noexcept {
        const u64 q = static_cast<u64>((static_cast<u128>(x) * barrett_) >> 64);
        const u64 r = x - q * p_;
        return r >= p_ ? r - p_ : r;
    }

    u64 p_;
    u64 barrett_;
    bool small_;
};

/// An element of F_p carried together with its modulus.
struct FpElement {
    u64 value = 0;
    u64 p = 2;

    FpElement() = default;
    FpElement(u64 v, u64 modulus) : value(v % modulus), p(modulus) {}
    static FpElement from_int(Int v, u64 modulus) { return {mod_floor(v, modulus), modulus}; }

    bool is_zero() const noexcept { return value == 0; }
    bool is_one() const noexcept { return value == 1 % p; }

    friend bool operator==(const FpElement&, const FpElement&) = default;

    friend FpElement operator+(FpElement a, FpElement b) {
        check(a, b);
        const u64 s = a.value + b.value;
        return {s >= a.p ? s - a.p : s, a.p};
    }
    friend FpElement operator-(FpElement a, FpElement b) {
        check(a, b);
        return {a.value >= b.value ? a.value - b.value : a.value + a.p - b.value, a.p};
    }
    friend FpElement operator-(FpElement a) { return {a.value == 0 ? 0 : a.p - a.value, a.p}; }
    friend FpElement operator*(FpElement a, FpElement b) {
        check(a, b);
        return {static_cast<u64>(static_cast<u128>(a.value) * b.value % a.p), a.p};
    }
    FpElement inverse() const { return {Modulus(p).inv(value), p}; }
    friend FpElement operator/(FpElement a, FpElement b) { return a * b.inverse(); }

    friend std::ostream& operator<<(std::ostream& os, const FpElement& e) {
        return os << e.value << " (mod " << e.p << ")";
    }

private:
    static void check(const FpElement& a, const FpElement& b) {
        if (a.p != b.p) throw PreconditionError("mixed moduli in F_p arithmetic");
    }
};

/// base^exp in F_p by square-and-multiply.
inline FpElement mod_pow(FpElement base, u64 exp) {
    return {Modulus(base.p).pow(base.value, exp), base.p};
}

/// Deterministic primitive cube root of unity mod p: g^((p-1)/3) for the
/// smallest g >= 2 whose power is not 1.
inline FpElement find_cube_root_of_unity(u64 p) {
    if (p % 3 != 1) throw PreconditionError("cube root of unity requires p = 1 (mod 3)");
    const Modulus mod(p);
    const u64 e = (p - 1) / 3;
    for (u64 g = 2; g < p; ++g) {
        const u64 z = mod.pow(g, e);
        if (z != 1) return {z, p};
    }
    throw InternalError("no primitive cube root of unity found");
}

}  // namespace picard::ff
