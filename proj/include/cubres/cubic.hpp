#pragma once

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cubres/intx.hpp"
#include "cubres/primes.hpp"

// Exact arithmetic layer: the order-3 power residue symbol computed two
// independent ways (closed-form evaluation from the x^2+243y^2 coordinates,
// and a discrete-power oracle usable for small prime moduli), plus the
// normalized x^2+243y^2 representation itself.

namespace cubres {

enum class CubicSymbol : std::uint8_t { Zero = 0, One = 1, Omega = 2, OmegaSq = 3 };

inline CubicSymbol operator*(CubicSymbol a, CubicSymbol b) {
    if (a == CubicSymbol::Zero || b == CubicSymbol::Zero) return CubicSymbol::Zero;
    // Exponents in {0,1,2} for {One, Omega, OmegaSq}.
    int ea = int(a) - 1, eb = int(b) - 1;
    return CubicSymbol(((ea + eb) % 3) + 1);
}

inline CubicSymbol conj(CubicSymbol a) {
    if (a == CubicSymbol::Omega) return CubicSymbol::OmegaSq;
    if (a == CubicSymbol::OmegaSq) return CubicSymbol::Omega;
    return a;
}

// a^e for e in {1,2}; used when matching the two conjugate characters.
inline CubicSymbol pow_sym(CubicSymbol a, int e) { return e == 1 ? a : a * a; }

inline bool is_nonresidue(CubicSymbol s) {
    return s == CubicSymbol::Omega || s == CubicSymbol::OmegaSq;
}

inline const char* to_cstr(CubicSymbol s) {
    switch (s) {
        case CubicSymbol::Zero: return "0";
        case CubicSymbol::One: return "1";
        case CubicSymbol::Omega: return "w";
        case CubicSymbol::OmegaSq: return "w2";
    }
    return "?";
}

// Candidate conductor f = x^2 + 243 y^2 in the normalized form:
// y > 0 and x == 3y - 1 (mod 6).
struct PrimeRep {
    u128 f = 0;
    i64 x = 0;
    u64 y = 0;

    bool consistent() const {
        if (y == 0) return false;
        u128 xx = u128(x < 0 ? -x : x);
        if (xx * xx + u128(243) * y * y != f) return false;
        i64 want = i64((3 * (y % 2) + 5) % 6);  // (3y - 1) mod 6
        i64 got = ((x % 6) + 6) % 6;
        return got == want;
    }
};

// ---- modular square roots -------------------------------------------------

// Tonelli-Shanks; p an odd prime, a a quadratic residue mod p.
inline u128 sqrt_mod(u128 a, u128 p) {
    a %= p;
    if (a == 0) return 0;
    if (powmod(a, (p - 1) / 2, p) != 1) throw std::domain_error("sqrt_mod: non-residue");
    if (p % 4 == 3) return powmod(a, (p + 1) / 4, p);
    u128 q = p - 1;
    int s = 0;
    while ((q & 1) == 0) {
        q >>= 1;
        ++s;
    }
    u128 z = 2;
    while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
    u128 m = s, c = powmod(z, q, p);
    u128 t = powmod(a, q, p);
    u128 r = powmod(a, (q + 1) / 2, p);
    while (t != 1) {
        u128 t2 = t;
        u128 i = 0;
        while (t2 != 1) {
            t2 = mulmod(t2, t2, p);
            ++i;
            if (i == m) throw std::domain_error("sqrt_mod: non-residue");
        }
        u128 b = powmod(c, u128(1) << (m - i - 1), p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    return r;
}

// Smallest s in [1, q) with s^2 == -3 (mod q). Requires q > 3 prime,
// q == 1 (mod 3); for q == 2 (mod 3) no root exists.
inline u128 sqrt_minus3(u128 q) {
    if (q <= 3 || q % 3 != 1) throw std::invalid_argument("sqrt_minus3: need prime q == 1 (mod 3), q > 3");
    u128 s = sqrt_mod(q - 3, q);
    u128 other = q - s;
    return s < other ? s : other;
}

// ---- x^2 + 243 y^2 representation ------------------------------------------

namespace detail {

// Cornacchia descent for x^2 + 243 y^2 = p, trying both square roots of -243.
inline std::optional<std::pair<u128, u128>> cornacchia_243(u128 p) {
    if (p <= 243) return std::nullopt;
    u128 s3 = sqrt_minus3(p);
    u128 r0 = mulmod(9, s3, p);  // root of -243
    u128 sp = isqrt_u128(p);
    for (u128 r : {r0, p - r0}) {
        u128 a = p, b = r;
        while (b > sp) {
            u128 t = a % b;
            a = b;
            b = t;
        }
        if (b == 0) continue;
        u128 rem = p - b * b;
        if (rem % 243 != 0) continue;
        u128 t = rem / 243, y;
        if (!is_square_u128(t, &y)) continue;
        if (y == 0) continue;
        return std::make_pair(b, y);
    }
    return std::nullopt;
}

// Exhaustive scan over y; usable as an independent oracle for small p.
inline std::optional<std::pair<u128, u128>> scan_243(u128 p) {
    for (u128 y = 1; 243 * y * y < p; ++y) {
        u128 rem = p - 243 * y * y;
        u128 x;
        if (is_square_u128(rem, &x) && x > 0) return std::make_pair(x, y);
    }
    return std::nullopt;
}

inline PrimeRep normalize_rep(u128 p, u128 xa, u128 y) {
    // x is determined up to sign; the normalization picks x == 2 (mod 3).
    i64 x = i64(xa);
    if (x % 3 != 2) x = -x;
    PrimeRep rep{p, x, u64(y)};
    if (!rep.consistent()) throw std::logic_error("represent243: normalization failed");
    return rep;
}

}  // namespace detail

// The unique normalized representation p = x^2 + 243 y^2, which exists iff
// 2 and 3 are both cubic residues mod p. Precondition: p prime, p == 1 (mod 3).
inline std::optional<PrimeRep> represent243(u128 p) {
    if (p % 3 != 1 || !is_prime_u128(p)) {
        throw std::invalid_argument("represent243: need a prime p == 1 (mod 3)");
    }
    auto sol = p < 100000000 ? detail::scan_243(p) : detail::cornacchia_243(p);
    if (!sol) return std::nullopt;
    return detail::normalize_rep(p, sol->first, sol->second);
}

// ---- closed-form cubic symbol from (x, y) ----------------------------------

// Element a + b*sqrt(-3) of Z/q[sqrt(-3)]; a ring, not necessarily a field.
struct QuadExtElement {
    u64 q;
    u64 a, b;

    QuadExtElement mul(const QuadExtElement& o) const {
        // (a + b s)(c + d s) = ac - 3bd + (ad + bc) s
        u128 ac = mulmod(a, o.a, q), bd = mulmod(b, o.b, q);
        u128 ad = mulmod(a, o.b, q), bc = mulmod(b, o.a, q);
        u128 na = addmod(ac, q - mulmod(3, bd, q) % q, q);
        u128 nb = addmod(ad, bc, q);
        return {q, u64(na), u64(nb)};
    }

    QuadExtElement pow(u128 e) const {
        QuadExtElement r{q, 1, 0}, base = *this;
        while (e > 0) {
            if (e & 1) r = r.mul(base);
            base = base.mul(base);
            e >>= 1;
        }
        return r;
    }
};

// Order-3 symbol of q against the conductor behind rep, evaluated from the
// residues (x mod q, y mod q) only.
//   q == 1 (mod 3):  classify (p (x - 9 y s))^((q-1)/3) with s = sqrt(-3) mod q
//   q == 2 (mod 3):  classify (x + 9 y sqrt(-3))^((q^2-1)/3) in Z/q[sqrt(-3)]
// Returns Zero when q divides f. Precondition: q > 3 prime.
inline CubicSymbol cubic_symbol(u64 q, const PrimeRep& rep) {
    if (q <= 3) throw std::invalid_argument("cubic_symbol: need q > 3");
    u64 xq = u64(((rep.x % i64(q)) + i64(q)) % i64(q));
    u64 yq = u64(rep.y % q);
    u64 pq = u64((u128(xq) * xq + u128(243) * yq % q * yq) % q);
    if (pq != u64(rep.f % q)) throw std::logic_error("cubic_symbol: inconsistent rep");
    if (pq == 0) return CubicSymbol::Zero;
    u64 inv2 = (q + 1) / 2;
    if (q % 3 == 1) {
        u64 s = u64(sqrt_minus3(q));
        u64 nys = u64(mulmod(mulmod(9, yq, q), s, q));
        u64 base = u64(mulmod(pq, (xq + q - nys) % q, q));
        u64 t = u64(powmod(base, (q - 1) / 3, q));
        u64 om = u64(mulmod(q - 1 + s, inv2, q));    // (-1+s)/2
        u64 om2 = u64(mulmod(2 * q - 1 - s, inv2, q));  // (-1-s)/2
        if (t == 1) return CubicSymbol::One;
        if (t == om) return CubicSymbol::Omega;
        if (t == om2) return CubicSymbol::OmegaSq;
        throw std::logic_error("cubic_symbol: value not a cube root of unity");
    }
    QuadExtElement e{q, xq, u64(mulmod(9, yq, q))};
    QuadExtElement t = e.pow(u128(q) * q / 3);  // (q^2-1)/3 == q*q/3 rounded down
    // Cube roots of unity in the extension: 1 and (-1 +- sqrt(-3))/2.
    u64 am = q - inv2;  // -1/2 mod q
    if (t.a == 1 && t.b == 0) return CubicSymbol::One;
    if (t.a == am && t.b == inv2) return CubicSymbol::Omega;
    if (t.a == am && t.b == q - inv2) return CubicSymbol::OmegaSq;
    throw std::logic_error("cubic_symbol: extension value not a cube root of unity");
}

// ---- discrete-power oracle --------------------------------------------------

// chi computed directly in (Z/f)^*, with the convention chi(g) = Omega for
// the least primitive root g of f. Intended for small prime f (exhaustive
// verification range); conductor-scale f goes through cubic_symbol instead.
class ChiOracle {
  public:
    explicit ChiOracle(u64 f) : f_(f) {
        if (f % 3 != 1 || !is_prime_u128(f)) {
            throw std::invalid_argument("ChiOracle: need a prime f == 1 (mod 3)");
        }
        if (f > 2000000000ull) throw std::invalid_argument("ChiOracle: modulus too large");
        // Distinct prime factors of f-1, by trial division.
        u64 m = f - 1;
        std::vector<u64> fac;
        for (u64 d = 2; d * d <= m; ++d) {
            if (m % d == 0) {
                fac.push_back(d);
                while (m % d == 0) m /= d;
            }
        }
        if (m > 1) fac.push_back(m);
        for (u64 g = 2;; ++g) {
            bool ok = true;
            for (u64 ell : fac) {
                if (powmod(g, (f - 1) / ell, f) == 1) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                g_ = g;
                break;
            }
        }
        omega_ = u64(powmod(g_, (f_ - 1) / 3, f_));
        omega2_ = u64(mulmod(omega_, omega_, f_));
    }

    u64 modulus() const { return f_; }
    u64 primitive_root() const { return g_; }

    CubicSymbol operator()(u128 n) const {
        u64 r = u64(n % f_);
        if (r == 0) return CubicSymbol::Zero;
        u64 t = u64(powmod(r, (f_ - 1) / 3, f_));
        if (t == 1) return CubicSymbol::One;
        if (t == omega_) return CubicSymbol::Omega;
        if (t == omega2_) return CubicSymbol::OmegaSq;
        throw std::logic_error("ChiOracle: value not a cube root of unity");
    }

    CubicSymbol of_signed(i64 n) const {
        i64 r = n % i64(f_);
        if (r < 0) r += i64(f_);
        return (*this)(u128(r));
    }

  private:
    u64 f_, g_ = 0, omega_ = 0, omega2_ = 0;
};

// Two smallest prime cubic non-residues mod f.
inline std::pair<u64, u64> first_nonresidues(u64 f) {
    ChiOracle chi(f);
    u64 q1 = 0;
    for (u64 q = 2; q < f; q = next_prime(q)) {
        if (is_nonresidue(chi(q))) {
            if (q1 == 0) {
                q1 = q;
            } else {
                return {q1, q};
            }
        }
    }
    throw std::runtime_error("first_nonresidues: search bound exhausted");
}

}  // namespace cubres
