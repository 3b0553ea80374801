#pragma once

#include <optional>
#include <vector>

#include "twistrank/intkit.hpp"

namespace twistrank {

/// y^2 = x^3 + m with m sixth-power-free; m_raw = m * t^6. The map
/// (x, y) -> (t^2 x, t^3 y) carries the canonical curve onto the raw one.
struct MordellCurve {
    Int m_raw;
    Int m;
    Int t;
};

MordellCurve canonicalize(const Int& m_raw);

/// Affine rational point in lowest terms: x = a/c^2, y = b/c^3, c >= 1,
/// gcd(a, c) = gcd(b, c) = 1. The point at infinity is represented as
/// std::nullopt wherever a point-or-identity is meant.
struct ProjPoint {
    Int a, b, c;

    Rat x() const;
    Rat y() const;
    Int height() const;  // naive height max(|a|, c^2)
    bool operator==(const ProjPoint&) const = default;
};

bool on_curve(const MordellCurve& curve, const ProjPoint& p);

/// Validates lowest-terms shape and curve membership; throws otherwise.
ProjPoint make_point(const MordellCurve& curve, Int a, Int b, Int c);
ProjPoint point_from_xy(const MordellCurve& curve, const Rat& x, const Rat& y);
ProjPoint negate(const ProjPoint& p);

enum class TorsionTag { Z6, Z3, Z2, Trivial };
const char* to_string(TorsionTag t);

struct TorsionClass {
    TorsionTag tag;
    std::vector<ProjPoint> points;  // every finite torsion point (O omitted)
};

/// Torsion of y^2 = x^3 + m by direct order computation with the
/// duplication formula: m = 1 -> Z6; m = -432 -> Z3; square m -> Z3 via
/// (0, sqrt(m)); cube m -> Z2 via (-cbrt(m), 0); else trivial.
TorsionClass torsion_class(const MordellCurve& curve);

/// [2]P by x' = (9x^4 - 8y^2 x)/(4y^2), y' = (-27x^6 + 36y^2 x^3 - 8y^4)/(8y^3).
/// y = 0 and the identity both map to the identity.
std::optional<ProjPoint> double_point(const MordellCurve& curve,
                                      const std::optional<ProjPoint>& p);

/// Order of a curve point when it divides 6; std::nullopt otherwise.
std::optional<int> small_order(const MordellCurve& curve, const ProjPoint& p);

/// Every point with max(|a|, c^2) <= height_bound, in deterministic order:
/// c ascending, a ascending, positive b first.
std::vector<ProjPoint> search_points(const MordellCurve& curve, const Int& height_bound);

struct SolutionTriple {
    Int x, y, z;
    bool operator==(const SolutionTriple&) const = default;
};

struct DescentConstraints {
    bool coprime_xyz = true;
    std::optional<Int> coprime_y_with;  // require gcd(y, value) = 1
};

/// Integer solutions of y^2 = x^3 + K z^6 with 1 <= z <= z_bound,
/// |x| <= x_bound, y > 0, subject to the requested gcd constraints.
/// Deterministic order: z ascending, x ascending.
std::vector<SolutionTriple> search_descent(const Int& K, const Int& z_bound,
                                           const Int& x_bound,
                                           const DescentConstraints& constraints);

/// ord_p(y) for every prime p | 3m, plus the flag "all ord_p(y) >= 1".
/// std::nullopt entries encode +infinity (y = 0).
struct ValuationProfile {
    std::vector<std::pair<Int, std::optional<long>>> ord_y;  // primes ascending
    bool all_positive = false;
};
ValuationProfile valuation_profile(const MordellCurve& curve, const ProjPoint& p);

}  // namespace twistrank
