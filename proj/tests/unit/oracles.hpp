#pragma once

// Brute-force oracles used by the tests. These stay independent of the
// production search/enumeration paths they check: everything here is a plain
// exhaustive loop over a finite candidate set.

#include <algorithm>
#include <optional>
#include <vector>

#include "twistrank/mordell.hpp"
#include "twistrank/pell.hpp"

namespace oracles {

using twistrank::Int;
using twistrank::MordellCurve;
using twistrank::ProjPoint;

// Order divides 6 iff [8]P = [2]P (both sides may be the identity).
inline bool has_order_dividing_6(const MordellCurve& curve, const ProjPoint& p) {
    std::optional<ProjPoint> q = twistrank::double_point(curve, p);
    std::optional<ProjPoint> s = twistrank::double_point(curve, twistrank::double_point(curve, q));
    return q == s;
}

// Nagell-Lutz style sweep: integral points with y = 0 or y^2 | 432 m^2,
// filtered by the finite-order check above.
inline std::vector<ProjPoint> nagell_lutz_torsion(const MordellCurve& curve) {
    std::vector<ProjPoint> pts;
    auto try_xy = [&](const Int& ycand) {
        Int x3 = ycand * ycand - curve.m;
        Int x;
        if (mpz_root(x.get_mpz_t(), x3.get_mpz_t(), 3) == 0) return;
        ProjPoint p = twistrank::make_point(curve, x, ycand, Int(1));
        if (!has_order_dividing_6(curve, p)) return;
        pts.push_back(p);
        if (ycand != 0) pts.push_back(twistrank::negate(p));
    };
    try_xy(Int(0));
    Int bound = 432 * curve.m * curve.m;
    for (Int y = 1; y * y <= bound; ++y) {
        Int y2 = y * y;
        if (!mpz_divisible_p(bound.get_mpz_t(), y2.get_mpz_t())) continue;
        try_xy(y);
    }
    return pts;
}

// Direct sweep for a Pell solution below the given U: returns true when no
// 1 <= U' < min(U, cap) solves T'^2 - d U'^2 = ±1, i.e. the unit is minimal
// as far as the sweep reaches. `proved` reports whether the sweep covered
// all of [1, U).
inline bool no_smaller_pell_solution(const Int& d, const Int& U, unsigned long cap,
                                     bool* proved = nullptr) {
    Int limit = U - 1;
    bool full = true;
    if (limit > cap) {
        limit = cap;
        full = false;
    }
    if (proved) *proved = full;
    for (Int u = 1; u <= limit; ++u) {
        Int du2 = d * u * u;
        if (twistrank::is_perfect_square(du2 + 1) || twistrank::is_perfect_square(du2 - 1)) {
            return false;
        }
    }
    return true;
}

// Any solution of T'^2 - d U'^2 = ±1 with U' >= 1 appears among the
// convergents of sqrt(d), so walking every convergent with denominator
// below U is an exhaustive minimality check even when U is astronomical.
inline bool no_smaller_convergent_solution(const twistrank::ContinuedFraction& cf,
                                           const Int& U) {
    Int p_prev = 1, p = cf.a0, q_prev = 0, q = 1;
    std::size_t i = 0;
    while (q < U) {
        Int v = p * p - cf.n * q * q;
        if (v == 1 || v == -1) return false;
        const Int& t = cf.period[i % cf.period.size()];
        Int pn = t * p + p_prev;
        Int qn = t * q + q_prev;
        p_prev = p;
        q_prev = q;
        p = pn;
        q = qn;
        ++i;
    }
    return true;
}

// Plain double loop over x and y for integral curve points, independent of
// search_points' square-detection path.
inline std::vector<std::pair<Int, Int>> integral_points_brute(const Int& m, const Int& xy_bound) {
    std::vector<std::pair<Int, Int>> out;
    for (Int x = -xy_bound; x <= xy_bound; ++x) {
        Int rhs = x * x * x + m;
        if (rhs < 0) continue;
        for (Int y = 0; y * y <= rhs; ++y) {
            if (y * y == rhs) {
                out.emplace_back(x, y);
                if (y != 0) out.emplace_back(x, Int(-y));
            }
        }
    }
    return out;
}

}  // namespace oracles
