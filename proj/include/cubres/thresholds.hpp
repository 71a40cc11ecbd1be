#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "cubres/bounds.hpp"

// Rejection thresholds f0(q1): for a conductor f >= f0(q1) whose least prime
// cubic non-residue is q1, a witness m small enough for the non-Euclidean
// criterion is guaranteed to exist, so the candidate can be rejected outright.
//
// A threshold is certified by the short-interval condition with
// h = ceil(lambda f^(1/6)) for some lambda on a fixed grid, H matched to the
// criterion (H = f/(3 q2) when q1 = 2, H = f/(2 q1 q2) otherwise), covering
// both placements of q2:
//   near regime  (q2 < h):  u = q1 q2, monotone envelope at q2 -> h
//   far  regime  (q2 >= h): u = q1, v = q2, q2 <= 1.821 f^(1/4) (log f)^(3/2)
// Both regimes must certify with the same lambda. The search never goes below
// 1e14, the floor under which the far-regime q2 bound is not quoted.

namespace cubres {

struct ThresholdRow {
    u32 q1;
    u32 mant;  // f0 = mant * 10^exp10, mant has two implied decimals
    int exp10;

    u128 f0_u128() const {
        u128 v = mant;
        for (int i = 0; i < exp10; ++i) v *= 10;
        return v;
    }
    double f0_double() const { return double(mant) * std::pow(10.0, exp10); }
};

// Reference threshold table: all 66 primes q1 <= 317.
inline const std::vector<ThresholdRow>& threshold_table() {
    static const std::vector<ThresholdRow> rows = {
        {2, 100, 12},   {3, 100, 12},   {5, 100, 12},   {7, 100, 12},   {11, 207, 12},
        {13, 389, 12},  {17, 108, 13},  {19, 166, 13},  {23, 345, 13},  {29, 847, 13},
        {31, 110, 14},  {37, 219, 14},  {41, 326, 14},  {43, 393, 14},  {47, 555, 14},
        {53, 888, 14},  {59, 136, 15},  {61, 155, 15},  {67, 224, 15},  {71, 283, 15},
        {73, 316, 15},  {79, 436, 15},  {83, 533, 15},  {89, 709, 15},  {97, 102, 16},
        {101, 121, 16}, {103, 131, 16}, {107, 153, 16}, {109, 166, 16}, {113, 194, 16},
        {127, 318, 16}, {131, 362, 16}, {137, 441, 16}, {139, 468, 16}, {149, 633, 16},
        {151, 668, 16}, {157, 791, 16}, {163, 924, 16}, {167, 105, 17}, {173, 122, 17},
        {179, 142, 17}, {181, 148, 17}, {191, 185, 17}, {193, 193, 17}, {197, 216, 17},
        {199, 225, 17}, {211, 292, 17}, {223, 377, 17}, {227, 404, 17}, {229, 422, 17},
        {233, 456, 17}, {239, 514, 17}, {241, 531, 17}, {251, 635, 17}, {257, 712, 17},
        {263, 779, 17}, {269, 871, 17}, {271, 896, 17}, {277, 998, 17}, {281, 106, 18},
        {283, 109, 18}, {293, 128, 18}, {307, 158, 18}, {311, 169, 18}, {313, 174, 18},
        {317, 183, 18},
    };
    return rows;
}

inline const ThresholdRow* threshold_row(u32 q1) {
    for (const auto& r : threshold_table()) {
        if (r.q1 == q1) return &r;
    }
    return nullptr;
}

template <std::floating_point T = double>
struct RegimeEval {
    bool ok = false;
    bool vacuous = false;
    Iv<T> lhs{0, 0};
};

// lambda grid: k/100 for k in [11, 199].
inline const std::vector<double>& threshold_lambda_grid() {
    static const std::vector<double> grid = [] {
        std::vector<double> g;
        for (int k = 11; k <= 199; ++k) g.push_back(double(k) / 100.0);
        return g;
    }();
    return grid;
}

namespace detail {

inline u64 prev_prime_leq(u64 n) {
    while (n >= 2 && !is_prime_u128(n)) --n;
    return n;
}

// q2 < h: u = q1 q2 with sigma = (q1+1)(q2+1), phi = (q1-1)(q2-1) and the
// criterion-matched H = f/(3 q2) resp. f/(2 q1 q2). Every factor of the
// condition's left side is increasing in q2 (u sigma/phi and 1/H^2 grow,
// E_u shrinks), so certifying at the largest prime q2 below h covers the
// whole regime.
template <std::floating_point T>
RegimeEval<T> eval_near_regime(u32 q1, const Iv<T>& f, u64 h) {
    RegimeEval<T> out;
    u64 q2s = h < 3 ? 0 : prev_prime_leq(h - 1);
    if (q2s <= q1) {  // no prime q2 in (q1, h)
        out.ok = out.vacuous = true;
        return out;
    }
    Iv<T> q2v = Iv<T>::from_u64(q2s);
    Iv<T> q1v = Iv<T>::from_u64(q1);
    BoundContext<T> c;
    c.f = f;
    c.h = h;
    c.r = 3;
    c.ell = 0;
    c.u = q1v * q2v;
    c.sigma_u = (q1v + T(1)) * (q2v + T(1));
    c.phi_u = (q1v - T(1)) * (q2v - T(1));
    c.H = q1 == 2 ? f / (T(3) * q2v) : f / (T(2) * q1v * q2v);
    auto res = nonresidue_condition_eval(c);
    out.lhs = res.lhs;
    out.ok = res.verdict == Verdict::Holds;
    if (out.ok && q1 != 2) {
        // Criterion side condition 10 q1^2 q2 <= f over the regime.
        out.ok = (T(10) * q1v * q1v * q2v).le(f);
    }
    return out;
}

// q2 >= h: u = q1, v = q2 with the far-regime bound q2 <= Qmax(f).
template <std::floating_point T>
RegimeEval<T> eval_far_regime(u32 q1, const Iv<T>& f, u64 h) {
    RegimeEval<T> out;
    if (h <= q1 || h <= 3) return out;  // u-part primes must stay below h
    Iv<T> qmax = Iv<T>::ratio(1821, 1000) * pow_ratio(f, 1, 4) * pow_ratio(log(f), 3, 2);
    if (qmax.lt(T(h))) {  // certified empty regime
        out.ok = out.vacuous = true;
        return out;
    }
    Iv<T> q1v = Iv<T>::from_u64(q1);
    BoundContext<T> c;
    c.f = f;
    c.h = h;
    c.r = 3;
    c.ell = 1;
    c.u = q1v;
    c.sigma_u = q1v + T(1);
    c.phi_u = q1v - T(1);
    c.H = q1 == 2 ? f / (T(3) * qmax) : f / (T(2) * q1v * qmax);
    auto res = nonresidue_condition_eval(c);
    out.lhs = res.lhs;
    out.ok = res.verdict == Verdict::Holds;
    if (out.ok && q1 != 2) {
        out.ok = (T(10) * q1v * q1v * qmax).le(f);
    }
    return out;
}

}  // namespace detail

template <std::floating_point T = double>
struct ThresholdCert {
    bool ok = false;
    double lambda = 0;
    Iv<T> worst_lhs{0, 0};
};

// Certify the threshold condition at a single f for one lambda (both h
// candidates when the enclosure of lambda f^(1/6) straddles an integer).
template <std::floating_point T = double>
ThresholdCert<T> certify_lambda(u32 q1, const Iv<T>& f, double lambda) {
    ThresholdCert<T> out;
    out.lambda = lambda;
    auto [h_lo, h_hi] = ceil_candidates(Iv<T>::point(T(lambda)) * pow_ratio(f, 1, 6));
    Iv<T> worst{0, 0};
    bool first = true;
    for (i64 h = h_lo; h <= h_hi; ++h) {
        if (h < 7) return out;
        auto near = detail::eval_near_regime(q1, f, u64(h));
        if (!near.ok) return out;
        auto far = detail::eval_far_regime(q1, f, u64(h));
        if (!far.ok) return out;
        Iv<T> w = near.vacuous ? far.lhs : (far.vacuous ? near.lhs : hull(near.lhs, far.lhs));
        worst = first ? w : hull(worst, w);
        first = false;
    }
    out.ok = true;
    out.worst_lhs = worst;
    return out;
}

template <std::floating_point T = double>
ThresholdCert<T> certify_threshold_at(u32 q1, double f,
                                      const std::vector<double>& grid = threshold_lambda_grid()) {
    Iv<T> fi = Iv<T>::point(T(f));
    for (double lambda : grid) {
        auto c = certify_lambda(q1, fi, lambda);
        if (c.ok) return c;
    }
    return {};
}

struct ThresholdSolveResult {
    double f0 = 0;
    bool clamped = false;  // condition already certified at the 1e14 floor
};

// Least f0 (up to the bisection resolution) such that the condition
// certifies at f0 for some grid lambda. The certified statement for any
// specific f comes from certify_threshold_at; monotone decay in f is
// grid-checked by callers, not assumed.
inline ThresholdSolveResult solve_threshold_f0(
    u32 q1, const std::vector<double>& grid = threshold_lambda_grid(), double rel_tol = 2e-4) {
    const double kFloor = 1e14;
    if (certify_threshold_at(q1, kFloor, grid).ok) return {kFloor, true};
    double lo = std::log10(kFloor), hi = std::log10(1e23);
    if (!certify_threshold_at(q1, std::pow(10.0, hi), grid).ok) return {0, false};
    while (std::pow(10.0, hi) - std::pow(10.0, lo) > rel_tol * std::pow(10.0, lo)) {
        double mid = (lo + hi) / 2;
        if (certify_threshold_at(q1, std::pow(10.0, mid), grid).ok)
            hi = mid;
        else
            lo = mid;
    }
    return {std::pow(10.0, hi), false};
}

}  // namespace cubres
