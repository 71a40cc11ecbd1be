#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cubres/intx.hpp"
#include "cubres/primes.hpp"

using namespace cubres;

namespace {

// Reference mulmod by repeated doubling; correct for any modulus < 2^127.
u128 mulmod_ref(u128 a, u128 b, u128 m) {
    a %= m;
    u128 r = 0;
    while (b > 0) {
        if (b & 1) r = addmod(r, a, m);
        a = addmod(a, a, m);
        b >>= 1;
    }
    return r;
}

u64 lcg(u64& s) {
    s = s * 6364136223846793005ull + 1442695040888963407ull;
    return s;
}

}  // namespace

TEST_CASE("to_string / parse round trips") {
    CHECK(to_string(u128(0)) == "0");
    CHECK(to_string((u128(1) << 70)) == "1180591620717411303424");
    CHECK(parse_u128("2e14") == u128(200000000000000ull));
    CHECK(parse_u128("8.47e15") == u128(8470000000000000ull));
    CHECK(parse_u128("1.83e20") == parse_u128("183000000000000000000"));
    CHECK(parse_u128("541") == 541);
    CHECK_THROWS(parse_u128("1.5"));
    CHECK_THROWS(parse_u128("12a"));
    CHECK_THROWS(parse_u128(""));
}

TEST_CASE("mulmod exact for moduli beyond 64 bits") {
    u64 s = 12345;
    for (int i = 0; i < 2000; ++i) {
        u128 m = (u128(lcg(s) % 63) << 64 | lcg(s)) % ((u128(1) << 70) - 1) + 2;
        u128 a = (u128(lcg(s)) << 64 | lcg(s)) % m;
        u128 b = (u128(lcg(s)) << 64 | lcg(s)) % m;
        CHECK(mulmod(a, b, m) == mulmod_ref(a, b, m));
    }
    // small-modulus fast path
    for (int i = 0; i < 2000; ++i) {
        u128 m = lcg(s) | 1;
        u128 a = lcg(s) % m, b = lcg(s) % m;
        CHECK(mulmod(a, b, m) == mulmod_ref(a, b, m));
    }
}

TEST_CASE("powmod and invmod") {
    CHECK(powmod(3, 6, 7) == 1);
    CHECK(powmod(2, 70, (u128(1) << 70) + 7) != 0);
    CHECK(invmod(3, 541) == u128(361));  // 3*361 = 1083 = 2*541 + 1
    u64 s = 777;
    for (int i = 0; i < 200; ++i) {
        u64 m = lcg(s) % 1000003 + 3;
        u64 a = lcg(s) % m;
        if (gcd_u128(a, m) != 1) continue;
        CHECK(mulmod(a, invmod(a, m), m) == 1);
    }
}

TEST_CASE("isqrt / icbrt edges") {
    for (u64 n : {0ull, 1ull, 2ull, 3ull, 4ull, 35ull, 36ull, 37ull}) {
        u128 r = isqrt_u128(n);
        CHECK(r * r <= n);
        CHECK((r + 1) * (r + 1) > n);
    }
    u64 s = 999;
    for (int i = 0; i < 5000; ++i) {
        u128 n = u128(lcg(s)) << (lcg(s) % 60);
        u128 r = isqrt_u128(n);
        CHECK(r * r <= n);
        CHECK((r + 1) * (r + 1) > n);
        u128 c = icbrt_u128(n);
        CHECK(c * c * c <= n);
        CHECK((c + 1) * (c + 1) * (c + 1) > n);
    }
    CHECK(is_square_u128(u128(1234567890123ull) * 1234567890123ull));
    CHECK(is_cube_u128(u128(98765ull) * 98765 * 98765));
    CHECK(!is_cube_u128(u128(98765ull) * 98765 * 98765 + 1));
}

TEST_CASE("deterministic primality agrees with trial division") {
    for (u64 n = 0; n < 20000; ++n) CHECK(is_prime_u128(n) == trial_division_is_prime(n));
    // strong pseudoprimes to small bases
    CHECK(!is_prime_u128(3215031751ull));       // spsp(2,3,5,7)
    CHECK(!is_prime_u128(3825123056546413051ull));  // spsp to first 9 primes
    CHECK(is_prime_u128(u128(1000000000000000003ull)));
    CHECK(next_prime(541) == 547);
    CHECK(next_prime(1) == 2);
}
