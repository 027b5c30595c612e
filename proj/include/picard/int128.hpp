#pragma once

// Exact integers used for L-polynomial coefficients and Eisenstein
// coordinates. With p < 2^40 every quantity the pipeline produces is
// bounded by roughly 2^123, so signed 128-bit arithmetic is exact; the
// checked helpers turn anything larger into a CapacityError.

#include <cstdint>
#include <string>
#include <string_view>

#include "picard/errors.hpp"

namespace picard {

using Int = __int128;
using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline Int checked_add(Int a, Int b) {
    Int r;
    if (__builtin_add_overflow(a, b, &r)) throw CapacityError("128-bit overflow in addition");
    return r;
}

inline Int checked_sub(Int a, Int b) {
    Int r;
    if (__builtin_sub_overflow(a, b, &r)) throw CapacityError("128-bit overflow in subtraction");
    return r;
}

inline Int checked_mul(Int a, Int b) {
    Int r;
    if (__builtin_mul_overflow(a, b, &r)) throw CapacityError("128-bit overflow in multiplication");
    return r;
}

/// Floor division (rounds toward negative infinity); b != 0.
inline Int floor_div(Int a, Int b) {
    Int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

/// Least non-negative residue of a modulo m > 0.
inline u64 mod_floor(Int a, u64 m) {
    Int r = a % static_cast<Int>(m);
    if (r < 0) r += static_cast<Int>(m);
    return static_cast<u64>(r);
}

inline std::string to_string(Int v) {
    if (v == 0) return "0";
    const bool neg = v < 0;
    // Work with the magnitude as unsigned so that INT128_MIN is handled.
    u128 mag = neg ? u128(0) - static_cast<u128>(v) : static_cast<u128>(v);
    std::string digits;
    while (mag != 0) {
        digits.push_back(static_cast<char>('0' + static_cast<int>(mag % 10)));
        mag /= 10;
    }
    if (neg) digits.push_back('-');
    return {digits.rbegin(), digits.rend()};
}

/// Parses an optionally signed decimal integer; throws InputError on
/// malformed text or overflow.
inline Int parse_int(std::string_view text) {
    if (text.empty()) throw InputError("empty integer");
    std::size_t pos = 0;
    bool neg = false;
    if (text[0] == '-' || text[0] == '+') {
        neg = text[0] == '-';
        pos = 1;
    }
    if (pos == text.size()) throw InputError("malformed integer '" + std::string(text) + "'");
    Int v = 0;
    for (; pos < text.size(); ++pos) {
        const char c = text[pos];
        if (c < '0' || c > '9') throw InputError("malformed integer '" + std::string(text) + "'");
        const int d = c - '0';
        if (__builtin_mul_overflow(v, Int(10), &v) ||
            __builtin_add_overflow(v, Int(neg ? -d : d), &v))
            throw InputError("integer out of 128-bit range '" + std::string(text) + "'");
    }
    return v;
}

}  // namespace picard
