#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "picard/errors.hpp"
#include "picard/ff/modular.hpp"

namespace picard::ff {

/// Widest [n_min, n_max] window sieve_primes will materialize.
inline constexpr u64 kMaxSieveSpan = u64(1) << 34;

namespace detail {

inline u64 isqrt(u64 n) {
    u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

inline std::vector<u64> small_primes(u64 limit) {
    std::vector<bool> composite(limit + 1, false);
    std::vector<u64> out;
    for (u64 i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return out;
}

}  // namespace detail

/// All primes in [n_min, n_max], ascending (segmented Eratosthenes).
inline std::vector<u64> sieve_primes(u64 n_min, u64 n_max) {
    if (n_min < 2 || n_min > n_max || n_max >= kMaxModulus)
        throw PreconditionError("sieve range must satisfy 2 <= n_min <= n_max < 2^40");
    if (n_max - n_min >= kMaxSieveSpan) throw CapacityError("sieve range too wide to materialize");

    const auto base = detail::small_primes(detail::isqrt(n_max));
    std::vector<u64> out;
    constexpr u64 kSegment = u64(1) << 18;
    std::vector<bool> composite;
    for (u64 lo = n_min; lo <= n_max;) {
        const u64 hi = std::min(n_max, lo + kSegment - 1);
        composite.assign(hi - lo + 1, false);
        for (const u64 q : base) {
            if (q * q > hi) break;
            u64 start = std::max(q * q, (lo + q - 1) / q * q);
            for (u64 j = start; j <= hi; j += q) composite[j - lo] = true;
        }
        for (u64 v = lo; v <= hi; ++v)
            if (!composite[v - lo]) out.push_back(v);
        if (hi == n_max) break;
        lo = hi + 1;
    }
    return out;
}

}  // namespace picard::ff
