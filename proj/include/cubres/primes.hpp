#pragma once

#include <vector>

#include "cubres/intx.hpp"

namespace cubres {

inline std::vector<u32> sieve_primes(u32 limit) {
    std::vector<bool> comp(limit + 1, false);
    std::vector<u32> out;
    for (u32 i = 2; i <= limit; ++i) {
        if (!comp[i]) {
            out.push_back(i);
            for (u64 j = u64(i) * i; j <= limit; j += i) comp[j] = true;
        }
    }
    return out;
}

// Primes up to 541 (the symbol-table bound); built once.
inline const std::vector<u32>& primes_to_541() {
    static const std::vector<u32> p = sieve_primes(541);
    return p;
}

inline bool miller_rabin_witness(u128 n, u128 a, u128 d, int s) {
    u128 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) return false;
    for (int i = 1; i < s; ++i) {
        x = mulmod(x, x, n);
        if (x == n - 1) return false;
    }
    return true;  // a witnesses compositeness
}

// Deterministic Miller-Rabin. The first 13 prime bases decide primality for
// all n < 3.317e24 (Sorenson & Webster), which covers the full 2^70 width
// used by the sieve.
inline bool is_prime_u128(u128 n) {
    if (n < 2) return false;
    if (n <= (std::numeric_limits<u64>::max)()) {
        u64 n64 = u64(n);
        for (u32 p : primes_to_541()) {
            if (n64 == p) return true;
            if (n64 % p == 0) return false;
        }
    } else {
        for (u32 p : primes_to_541()) {
            if (n % p == 0) return false;
        }
    }
    if (n < u128(541) * 541) return true;
    u128 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    static constexpr u32 kBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
    for (u32 a : kBases) {
        if (miller_rabin_witness(n, a, d, s)) return false;
    }
    return true;
}

inline u64 next_prime(u64 n) {
    u64 c = n + 1;
    if (c <= 2) return 2;
    if (c % 2 == 0) ++c;
    while (!is_prime_u128(c)) c += 2;
    return c;
}

// Slow reference used only by tests: factor search up to sqrt(n).
inline bool trial_division_is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

}  // namespace cubres
