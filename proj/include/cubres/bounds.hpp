#pragma once

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "cubres/cubic.hpp"
#include "cubres/interval.hpp"
#include "cubres/primes.hpp"

// Certified evaluation of the explicit character-sum machinery: the moment
// bound W(f,h,r) with its d_r coefficients, the short-interval existence
// condition for a small non-residue, the bilinear-sum estimate with its
// E(U,V)/E1/E2 error terms, the coprime-pair count B1(U,V), the Mertens-type
// prime-reciprocal bound, and the exponent bounds rho_1, rho_2.

namespace cubres {

// ---- exact rationals for the d_r table --------------------------------------

struct Rat {
    i128 num = 0, den = 1;

    static Rat of(i128 n, i128 d) {
        Rat r{n, d};
        r.reduce();
        return r;
    }
    void reduce() {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        i128 g = i128(gcd_u128(u128(num < 0 ? -num : num), u128(den)));
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }
    friend Rat operator+(Rat a, Rat b) { return of(a.num * b.den + b.num * a.den, a.den * b.den); }
    friend Rat operator*(Rat a, Rat b) { return of(a.num * b.num, a.den * b.den); }
    friend bool operator==(const Rat& a, const Rat& b) { return a.num == b.num && a.den == b.den; }
};

inline i128 factorial_i128(unsigned n) {
    i128 r = 1;
    for (unsigned k = 2; k <= n; ++k) r *= i128(k);
    return r;
}

inline i128 ipow_i128(i128 b, unsigned e) {
    i128 r = 1;
    while (e--) r *= b;
    return r;
}

// d_r(h) = (1 / (r! h^r)) * sum_{n <= r/3} (r! / (n! 6^n))^2 h^(r-n) / (r-3n)!
inline Rat d_r_exact(unsigned r, u64 h) {
    if (r == 0 || h == 0) throw std::invalid_argument("d_r: need r, h >= 1");
    Rat sum{0, 1};
    i128 rf = factorial_i128(r);
    for (unsigned n = 0; 3 * n <= r; ++n) {
        i128 c = rf / (factorial_i128(n) * ipow_i128(6, n));
        Rat term = Rat::of(c * c * ipow_i128(i128(h), r - n), factorial_i128(r - 3 * n));
        sum = sum + term;
    }
    return Rat::of(sum.num, sum.den * rf * ipow_i128(i128(h), r));
}

// d_r as a polynomial in 1/h: d_r(h) = sum_n K_n h^(-n) with exact rational K_n.
inline std::vector<Rat> d_r_coeffs(unsigned r) {
    i128 rf = factorial_i128(r);
    std::vector<Rat> ks;
    for (unsigned n = 0; 3 * n <= r; ++n) {
        i128 c = rf / (factorial_i128(n) * ipow_i128(6, n));
        ks.push_back(Rat::of(c * c, rf * factorial_i128(r - 3 * n)));
    }
    return ks;
}

template <std::floating_point T = double>
Iv<T> rat_iv(const Rat& q) {
    return Iv<T>::from_u128(u128(q.num)) / Iv<T>::from_u128(u128(q.den));
}

template <std::floating_point T = double>
Iv<T> d_r_iv(unsigned r, const Iv<T>& h) {
    Iv<T> sum = Iv<T>::point(0);
    Iv<T> hp = Iv<T>::point(1);
    for (const Rat& k : d_r_coeffs(r)) {
        sum = sum + rat_iv<T>(k) / hp;
        hp = hp * h;
    }
    return sum;
}

// W(f,h,r) = 2r - 1 + f^(1/2) h^(-r) r! d_r(h)
template <std::floating_point T = double>
Iv<T> W_iv(const Iv<T>& f, const Iv<T>& h, unsigned r) {
    Iv<T> hr = pow_i(h, r);
    Iv<T> rf = Iv<T>::from_u128(u128(factorial_i128(r)));
    return T(2 * r - 1) + sqrt(f) / hr * rf * d_r_iv<T>(r, h);
}

template <std::floating_point T = double>
Iv<T> W_iv(const Iv<T>& f, u64 h, unsigned r) {
    return W_iv(f, Iv<T>::from_u64(h), r);
}

// ---- exact moment sum for small prime moduli --------------------------------

// |a*w + b*w^2 + c|^2 = a^2 + b^2 + c^2 - ab - bc - ca for integer counts.
inline u64 abs_sq_counts(i64 a, i64 b, i64 c) {
    i64 v = a * a + b * b + c * c - a * b - b * c - c * a;
    return u64(v);
}

// S_chi(f,h,r) = sum_{x=1..f} |sum_{k=0..h-1} chi(x+k)|^(2r), evaluated
// exactly over the integers. Small f only.
inline u128 S_chi_bruteforce(u64 f, u64 h, unsigned r) {
    if (f > 200000) throw std::invalid_argument("S_chi_bruteforce: modulus too large");
    ChiOracle chi(f);
    std::vector<CubicSymbol> tab(f);
    for (u64 n = 0; n < f; ++n) tab[n] = chi(n);
    u128 total = 0;
    for (u64 x = 1; x <= f; ++x) {
        i64 cnt[4] = {0, 0, 0, 0};
        for (u64 k = 0; k < h; ++k) ++cnt[int(tab[(x + k) % f])];
        u64 a2 = abs_sq_counts(cnt[int(CubicSymbol::Omega)], cnt[int(CubicSymbol::OmegaSq)],
                               cnt[int(CubicSymbol::One)]);
        u128 term = 1;
        for (unsigned j = 0; j < r; ++j) term *= a2;
        total += term;
    }
    return total;
}

// ---- short-interval non-residue condition -----------------------------------

// E_u(X) = 1 - (pi^2/6) sigma(u) (sigma(u)/4 + phi(u)/u + phi(u)/X) / X
template <std::floating_point T = double>
Iv<T> E_u_iv(const Iv<T>& X, const Iv<T>& u, const Iv<T>& sigma, const Iv<T>& phi) {
    Iv<T> inner = sigma / T(4) + phi / u + phi / X;
    return T(1) - pi_sq_over_6<T>() * sigma * inner / X;
}

template <std::floating_point T = double>
struct BoundContext {
    Iv<T> f;
    u64 h = 0;
    unsigned r = 0;
    Iv<T> u, sigma_u, phi_u;  // may enclose a parameter family
    unsigned ell = 0;         // number of prime factors of the v-part
    Iv<T> H;
};

// sigma and phi of a squarefree integer, by factorization over small primes.
template <std::floating_point T = double>
BoundContext<T> make_context(const Iv<T>& f, u64 h, unsigned r, u64 u_int, unsigned ell,
                             const Iv<T>& H) {
    u64 sigma = 1, phi = 1, m = u_int;
    for (u64 d = 2; d * d <= m; ++d) {
        if (m % d == 0) {
            if ((m / d) % d == 0) throw std::invalid_argument("make_context: u not squarefree");
            sigma *= d + 1;
            phi *= d - 1;
            m /= d;
        }
    }
    if (m > 1) {
        sigma *= m + 1;
        phi *= m - 1;
    }
    return BoundContext<T>{f, h, r, Iv<T>::from_u64(u_int), Iv<T>::from_u64(sigma),
                           Iv<T>::from_u64(phi), ell, H};
}

enum class Verdict { Holds, Unknown, Fails, Inapplicable };

template <std::floating_point T = double>
struct ConditionResult {
    Verdict verdict = Verdict::Inapplicable;
    Iv<T> lhs{0, 0};
    Iv<T> Eu{0, 0};
};

// Main condition: (1/E_u(X)) (pi^2/6) (sigma/phi) u h f^(1/2)
//                 (2h/(h-3l))^(2r) W(f,h,r) / H^2 < 1.
// Holds when the certified upper bound of the left side is below 1;
// Inapplicable when E_u(X) cannot be certified positive (or a structural
// precondition fails).
template <std::floating_point T = double>
ConditionResult<T> nonresidue_condition_eval(const BoundContext<T>& c) {
    ConditionResult<T> res;
    if (c.r == 0 || c.h == 0 || c.r > 9 * c.h || c.h <= 3 * c.ell) {
        throw std::invalid_argument("nonresidue_condition_eval: preconditions r<=9h, h>3l violated");
    }
    Iv<T> h = Iv<T>::from_u64(c.h);
    Iv<T> X = c.H / h;
    if (!(X / c.u).ge(T(1))) return res;  // X/u >= 1 not certified
    res.Eu = E_u_iv(X, c.u, c.sigma_u, c.phi_u);
    if (!res.Eu.gt(T(0))) return res;
    Iv<T> ratio = pow_i(T(2) * h / (h - T(3 * c.ell)), 2 * c.r);
    Iv<T> numer = pi_sq_over_6<T>() * (c.sigma_u / c.phi_u) * c.u * h * sqrt(c.f) * ratio *
                  W_iv(c.f, c.h, c.r);
    res.lhs = numer / (res.Eu * c.H * c.H);
    if (res.lhs.lt(T(1)))
        res.verdict = Verdict::Holds;
    else if (res.lhs.ge(T(1)))
        res.verdict = Verdict::Fails;
    else
        res.verdict = Verdict::Unknown;
    return res;
}

template <std::floating_point T = double>
bool nonresidue_condition_holds(const BoundContext<T>& c, Iv<T>* lhs_out = nullptr) {
    auto r = nonresidue_condition_eval(c);
    if (lhs_out) *lhs_out = r.lhs;
    return r.verdict == Verdict::Holds;
}

// ---- bilinear character sum bound -------------------------------------------

template <std::floating_point T = double>
struct CharSumContext {
    Iv<T> f;
    Iv<T> T_, U_, V_;  // box dimensions; intervals so ceil/floor slack can ride along
    unsigned r = 0;
    Iv<T> theta;
};

// E(U,V) = (6/pi^2)(1/U + 1/V) log^2 U + (2.66/U + 2.26/V) log U + 7.57/U + 9.82/V
template <std::floating_point T = double>
Iv<T> E_UV_iv(const Iv<T>& U, const Iv<T>& V) {
    Iv<T> lu = log(U);
    Iv<T> six_pi2 = T(6) / (pi_iv<T>() * pi_iv<T>());
    return six_pi2 * (T(1) / U + T(1) / V) * lu * lu +
           (Iv<T>::ratio(266, 100) / U + Iv<T>::ratio(226, 100) / V) * lu +
           Iv<T>::ratio(757, 100) / U + Iv<T>::ratio(982, 100) / V;
}

template <std::floating_point T = double>
struct BilinearBound {
    Iv<T> Delta, E1, E2, EUV;
};

// Delta = (f^(1/2) W(f,T,r) / (UV))^(1/2r)
// E1 = Delta ((12/pi^2) theta log U + 1 + U^theta E(U,V))^(1/2r)
// E2 = (12/pi^2) U^(-theta) + E(U,V)
template <std::floating_point T = double>
BilinearBound<T> bilinear_bound(const CharSumContext<T>& c) {
    if (!(c.U_ * c.V_).lt(c.f)) throw std::invalid_argument("bilinear_bound: need UV < f");
    if (!(c.theta.gt(T(0)) && c.theta.lt(T(1)))) {
        throw std::invalid_argument("bilinear_bound: need theta in (0,1)");
    }
    BilinearBound<T> out;
    Iv<T> twelve_pi2 = T(12) / (pi_iv<T>() * pi_iv<T>());
    out.EUV = E_UV_iv(c.U_, c.V_);
    Iv<T> dpow = sqrt(c.f) * W_iv(c.f, c.T_, c.r) / (c.U_ * c.V_);
    out.Delta = pow_ratio(dpow, 1, i64(2 * c.r));
    Iv<T> lu = log(c.U_);
    Iv<T> utheta = pow_iv(c.U_, c.theta);
    Iv<T> inner = twelve_pi2 * c.theta * lu + T(1) + utheta * out.EUV;
    out.E1 = out.Delta * pow_ratio(inner, 1, i64(2 * c.r));
    out.E2 = twelve_pi2 / utheta + out.EUV;
    return out;
}

// ---- coprime-pair count bound ------------------------------------------------

// B1(U,V) = (6/pi^2) UV + (6/pi^2)(U+V) log U + 2.044 V + 1.652 U
//           + 2.04 V/sqrt(U) + 2.72 sqrt(U)
template <std::floating_point T = double>
Iv<T> B1_iv(const Iv<T>& U, const Iv<T>& V) {
    Iv<T> six_pi2 = T(6) / (pi_iv<T>() * pi_iv<T>());
    Iv<T> su = sqrt(U);
    return six_pi2 * U * V + six_pi2 * (U + V) * log(U) + Iv<T>::ratio(2044, 1000) * V +
           Iv<T>::ratio(1652, 1000) * U + Iv<T>::ratio(204, 100) * V / su +
           Iv<T>::ratio(272, 100) * su;
}

inline u64 coprime_pairs_bruteforce(u64 U, u64 V) {
    u64 n = 0;
    for (u64 u = 1; u <= U; ++u) {
        for (u64 v = 1; v <= V; ++v) {
            if (std::gcd(u, v) == 1) ++n;
        }
    }
    return n;
}

// ---- Mertens-type bound --------------------------------------------------------

// Meissel-Mertens constant, stored as the enclosure [0.26149, 0.26150]
// matching the precision the bound is quoted at.
template <std::floating_point T = double>
Iv<T> mertens_B() {
    return Iv<T>::make(T(0.26149), T(0.26150));
}

// Upper bound for sum_{p <= x} 1/p, valid for x >= 286.
template <std::floating_point T = double>
Iv<T> mertens_upper(const Iv<T>& x) {
    if (!x.ge(T(286))) throw std::invalid_argument("mertens_upper: need x >= 286");
    Iv<T> lx = log(x);
    return log(lx) + mertens_B<T>() + T(1) / (T(2) * lx * lx);
}

// Certified sum of 1/p over primes p <= x (used to validate the bound).
template <std::floating_point T = double>
Iv<T> prime_reciprocal_sum(u32 x) {
    Iv<T> s = Iv<T>::point(0);
    for (u32 p : sieve_primes(x)) s = s + T(1) / Iv<T>::from_u64(p);
    return s;
}

// ---- exponent bounds rho_1, rho_2 ----------------------------------------------

template <std::floating_point T = double>
struct RhoBounds {
    Iv<T> rho1_max, rho2_max;
};

// From lower bounds on log(1/rho_i); q floors enter as worst cases.
// rho2 requires q2 >= 103, rho1 requires q1 >= 101.
template <std::floating_point T = double>
RhoBounds<T> rho_bound(const Iv<T>& q1, const Iv<T>& q2, const Iv<T>& V0, const Iv<T>& eps) {
    if (!q2.ge(T(103)) || !q1.ge(T(101))) {
        throw std::invalid_argument("rho_bound: need q1 >= 101, q2 >= 103");
    }
    Iv<T> lV = log(V0);
    Iv<T> common = Iv<T>::ratio(2, 3) * (T(1) - eps) - T(1) / (T(2) * lV * lV) - T(2) / lV;
    Iv<T> lq2 = log(q2), lq1 = log(q1);
    Iv<T> l2 = common - T(1) / q1 - T(1) / q2 - T(1) / (T(2) * lq2 * lq2);
    Iv<T> l1 = common - T(1) / q1 - T(1) / (T(2) * lq1 * lq1);
    return {exp(-l1), exp(-l2)};
}

// ---- balanced multiset lower bound ----------------------------------------------

// |a + b w + c w^2| >= (N - 3K)/2 with N = a+b+c, K = min(a,b,c).
inline double multiset_sum_lower(u64 a, u64 b, u64 c) {
    u64 n = a + b + c;
    u64 k = std::min(a, std::min(b, c));
    return (double(n) - 3.0 * double(k)) / 2.0;
}

// Exact |a + b w + c w^2|^2, for checking the bound without rounding.
inline u128 multiset_abs_sq(u64 a, u64 b, u64 c) {
    return u128(abs_sq_counts(i64(b), i64(c), i64(a)));
}

}  // namespace cubres
