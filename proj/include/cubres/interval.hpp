#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <stdexcept>

#include "cubres/intx.hpp"

namespace cubres {

// Closed interval [lo, hi] with outward rounding.
//
// Every primitive is computed in round-to-nearest and then widened outward
// by nextafter steps: one step for operations the FPU rounds correctly
// (+, -, *, /, sqrt), several for libm transcendentals whose worst-case
// error is a couple of ulps. The result is a rigorous enclosure without
// touching the FPU rounding mode, so it survives any optimization level.
//
// The parameter T selects the working precision; re-running a computation
// at long double must produce an enclosure nested inside the double one,
// which is one of the correctness checks in the test suite.
template <std::floating_point T>
struct Iv {
    T lo, hi;

    static constexpr T inf() { return std::numeric_limits<T>::infinity(); }

    static Iv point(T v) { return {v, v}; }
    static Iv make(T l, T h) {
        if (!(l <= h)) throw std::invalid_argument("interval endpoints out of order");
        return {l, h};
    }

    static T step_dn(T x, int n = 1) {
        for (int i = 0; i < n; ++i) x = std::nextafter(x, -inf());
        return x;
    }
    static T step_up(T x, int n = 1) {
        for (int i = 0; i < n; ++i) x = std::nextafter(x, inf());
        return x;
    }

    static Iv widen(T l, T h, int n = 1) { return {step_dn(l, n), step_up(h, n)}; }

    static Iv from_u64(u64 v) {
        T t = T(v);
        if (v < (u64(1) << 62) && u64(t) == v) return point(t);
        return widen(t, t);
    }
    static Iv from_u128(u128 v) {
        T t = T((long double)v);
        return widen(t, t, 2);
    }
    // Exact rational n/d.
    static Iv ratio(i64 n, i64 d) { return point(T(n)) / point(T(d)); }

    bool valid() const { return lo <= hi; }
    bool contains(T v) const { return lo <= v && v <= hi; }
    bool inside(const Iv& outer) const { return outer.lo <= lo && hi <= outer.hi; }
    T width() const { return hi - lo; }
    T mid() const { return (lo + hi) / 2; }

    // Certified comparisons: true only when the whole interval qualifies.
    bool le(T c) const { return hi <= c; }
    bool lt(T c) const { return hi < c; }
    bool ge(T c) const { return lo >= c; }
    bool gt(T c) const { return lo > c; }
    bool le(const Iv& o) const { return hi <= o.lo; }
    bool lt(const Iv& o) const { return hi < o.lo; }
    bool ge(const Iv& o) const { return lo >= o.hi; }
    bool gt(const Iv& o) const { return lo > o.hi; }

    Iv operator-() const { return {-hi, -lo}; }

    friend Iv operator+(const Iv& a, const Iv& b) { return widen(a.lo + b.lo, a.hi + b.hi); }
    friend Iv operator-(const Iv& a, const Iv& b) { return widen(a.lo - b.hi, a.hi - b.lo); }

    friend Iv operator*(const Iv& a, const Iv& b) {
        T p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
        T l = std::min(std::min(p1, p2), std::min(p3, p4));
        T h = std::max(std::max(p1, p2), std::max(p3, p4));
        return widen(l, h);
    }

    friend Iv operator/(const Iv& a, const Iv& b) {
        if (b.lo <= 0 && b.hi >= 0) throw std::domain_error("interval division by zero");
        T p1 = a.lo / b.lo, p2 = a.lo / b.hi, p3 = a.hi / b.lo, p4 = a.hi / b.hi;
        T l = std::min(std::min(p1, p2), std::min(p3, p4));
        T h = std::max(std::max(p1, p2), std::max(p3, p4));
        return widen(l, h);
    }

    friend Iv operator+(T a, const Iv& b) { return point(a) + b; }
    friend Iv operator-(T a, const Iv& b) { return point(a) - b; }
    friend Iv operator*(T a, const Iv& b) { return point(a) * b; }
    friend Iv operator/(T a, const Iv& b) { return point(a) / b; }
    friend Iv operator+(const Iv& a, T b) { return a + point(b); }
    friend Iv operator-(const Iv& a, T b) { return a - point(b); }
    friend Iv operator*(const Iv& a, T b) { return a * point(b); }
    friend Iv operator/(const Iv& a, T b) { return a / point(b); }
};

using IvD = Iv<double>;
using IvL = Iv<long double>;

template <std::floating_point T>
Iv<T> sqrt(const Iv<T>& a) {
    if (a.lo < 0) throw std::domain_error("interval sqrt of negative");
    return Iv<T>::widen(std::sqrt(a.lo), std::sqrt(a.hi));
}

// libm log/exp are monotone but not guaranteed correctly rounded; 8 ulps of
// slack is far beyond any measured worst case for glibc.
inline constexpr int kLibmSlack = 8;

template <std::floating_point T>
Iv<T> log(const Iv<T>& a) {
    if (a.lo <= 0) throw std::domain_error("interval log of non-positive");
    return Iv<T>::widen(std::log(a.lo), std::log(a.hi), kLibmSlack);
}

template <std::floating_point T>
Iv<T> exp(const Iv<T>& a) {
    return Iv<T>::widen(std::exp(a.lo), std::exp(a.hi), kLibmSlack);
}

template <std::floating_point T>
Iv<T> pow_i(const Iv<T>& a, unsigned k) {
    Iv<T> r = Iv<T>::point(1);
    Iv<T> b = a;
    while (k > 0) {
        if (k & 1) r = r * b;
        b = b * b;
        k >>= 1;
    }
    return r;
}

// x^(num/den) for x > 0.
template <std::floating_point T>
Iv<T> pow_ratio(const Iv<T>& x, i64 num, i64 den) {
    return exp(log(x) * Iv<T>::ratio(num, den));
}

template <std::floating_point T>
Iv<T> pow_iv(const Iv<T>& x, const Iv<T>& e) {
    return exp(log(x) * e);
}

template <std::floating_point T>
Iv<T> root(const Iv<T>& x, i64 k) {
    return pow_ratio(x, 1, k);
}

// pi to full long double precision, rounded outward.
template <std::floating_point T>
Iv<T> pi_iv() {
    const long double p = 3.14159265358979323846264338327950288L;
    return Iv<T>::widen(T(p), T(p), 2);
}

template <std::floating_point T>
Iv<T> pi_sq_over_6() {
    Iv<T> p = pi_iv<T>();
    return p * p / T(6);
}

template <std::floating_point T>
Iv<T> hull(const Iv<T>& a, const Iv<T>& b) {
    return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

// Integer ceiling of an interval value. Usually a single integer; when the
// enclosure straddles an integer both candidates are returned and callers
// must certify every one.
template <std::floating_point T>
inline std::pair<i64, i64> ceil_candidates(const Iv<T>& x) {
    i64 a = i64(std::ceil(x.lo));
    i64 b = i64(std::ceil(x.hi));
    return {a, b};
}

template <std::floating_point T>
inline std::pair<i64, i64> floor_candidates(const Iv<T>& x) {
    i64 a = i64(std::floor(x.lo));
    i64 b = i64(std::floor(x.hi));
    return {a, b};
}

}  // namespace cubres
