#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cubres {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

// All conductor-level arithmetic runs on u128; moduli stay below 2^70.

inline std::string to_string(u128 v) {
    if (v == 0) return "0";
    char buf[40];
    int n = 0;
    while (v > 0) {
        buf[n++] = char('0' + int(v % 10));
        v /= 10;
    }
    std::string s;
    s.reserve(n);
    while (n > 0) s.push_back(buf[--n]);
    return s;
}

inline std::string to_string(i128 v) {
    if (v < 0) return "-" + to_string(u128(-v));
    return to_string(u128(v));
}

// Parses a non-negative integer, optionally in scientific form ("8.47e15").
// The value must be an exact integer; anything fractional is rejected.
inline u128 parse_u128(std::string_view s) {
    if (s.empty()) throw std::invalid_argument("empty integer literal");
    u128 mant = 0;
    int frac_digits = 0;
    bool seen_dot = false, any = false;
    std::size_t i = 0;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (c >= '0' && c <= '9') {
            mant = mant * 10 + u128(c - '0');
            if (seen_dot) ++frac_digits;
            any = true;
        } else if (c == '.') {
            if (seen_dot) throw std::invalid_argument("bad integer literal");
            seen_dot = true;
        } else if (c == 'e' || c == 'E') {
            break;
        } else if (c == '\'' || c == '_') {
            continue;  // digit separators
        } else {
            throw std::invalid_argument("bad integer literal: " + std::string(s));
        }
    }
    long exp10 = 0;
    if (i < s.size()) {
        ++i;  // skip 'e'
        bool neg = false;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = (s[i++] == '-');
        if (i == s.size()) throw std::invalid_argument("bad exponent");
        for (; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("bad exponent");
            exp10 = exp10 * 10 + (s[i] - '0');
        }
        if (neg) exp10 = -exp10;
    }
    if (!any) throw std::invalid_argument("bad integer literal");
    exp10 -= frac_digits;
    if (exp10 < 0) throw std::invalid_argument("not an integer: " + std::string(s));
    for (long k = 0; k < exp10; ++k) {
        if (mant > (std::numeric_limits<u64>::max)() && mant > (u128(1) << 120)) {
            throw std::out_of_range("integer literal too large");
        }
        mant *= 10;
    }
    return mant;
}

constexpr u128 gcd_u128(u128 a, u128 b) {
    while (b != 0) {
        u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// (a*b) mod m, exact for any m < 2^70.
inline u128 mulmod(u128 a, u128 b, u128 m) {
    a %= m;
    b %= m;
    if (m <= (std::numeric_limits<u64>::max)()) {
        return (u128)(u64)a * (u64)b % m;
    }
    // Split a into 32-bit limbs; every partial product stays under 2^104.
    u128 hi = a >> 32, lo = a & 0xffffffffu;
    u128 t = hi * b % m;
    t = (t << 32) % m;
    return (t + lo * b) % m;
}

inline u128 addmod(u128 a, u128 b, u128 m) {
    a %= m;
    b %= m;
    u128 r = a + b;
    if (r >= m || r < a) r -= m;
    return r;
}

inline u128 powmod(u128 a, u128 e, u128 m) {
    if (m == 1) return 0;
    u128 r = 1;
    a %= m;
    while (e > 0) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

// Modular inverse for coprime a, m (extended Euclid on signed 128-bit).
inline u128 invmod(u128 a, u128 m) {
    i128 t = 0, newt = 1;
    i128 r = i128(m), newr = i128(a % m);
    while (newr != 0) {
        i128 q = r / newr;
        i128 tmp = t - q * newt;
        t = newt;
        newt = tmp;
        tmp = r - q * newr;
        r = newr;
        newr = tmp;
    }
    if (r != 1) throw std::domain_error("invmod: arguments not coprime");
    if (t < 0) t += i128(m);
    return u128(t);
}

inline u128 isqrt_u128(u128 n) {
    if (n == 0) return 0;
    // Float seed, then fix up; result fits in 64 bits for any u128 input.
    u128 x = (u128)(long double)__builtin_sqrtl((long double)n);
    if (x > 0) --x;
    while (x + 1 <= n / (x + 1)) ++x;
    return x;
}

inline u128 icbrt_u128(u128 n) {
    if (n == 0) return 0;
    u128 x = (u128)(long double)__builtin_cbrtl((long double)n);
    if (x > 1) x -= 2;
    while ((x + 1) * (x + 1) <= n / (x + 1)) ++x;
    return x;
}

inline bool is_square_u128(u128 n, u128* root = nullptr) {
    u128 r = isqrt_u128(n);
    if (root) *root = r;
    return r * r == n;
}

inline bool is_cube_u128(u128 n) {
    u128 r = icbrt_u128(n);
    return r * r * r == n;
}

}  // namespace cubres
