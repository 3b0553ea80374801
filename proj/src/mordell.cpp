#include "twistrank/mordell.hpp"

#include <algorithm>
#include <stdexcept>

#include "twistrank/errors.hpp"

namespace twistrank {

MordellCurve canonicalize(const Int& m_raw) {
    if (m_raw == 0) throw std::domain_error("canonicalize: m must be nonzero");
    Factorization f = factor_trial(abs(m_raw));
    if (!f.complete) {
        // Every prime above the trial bound would need exponent >= 6 to
        // matter, i.e. a cofactor of at least bound^6.
        if (f.cofactor() >= pow_int(Int(kDefaultTrialBound), 6)) {
            throw IncompleteFactorization("canonicalize: cannot certify the sixth-power part of " +
                                          m_raw.get_str());
        }
    }
    Int t = 1;
    for (const auto& [p, e] : f.factors) {
        for (unsigned i = 0; i < e / 6; ++i) t *= p;
    }
    return {m_raw, Int(m_raw / pow_int(t, 6)), t};
}

Rat ProjPoint::x() const {
    Rat r(a, c * c);
    r.canonicalize();
    return r;
}

Rat ProjPoint::y() const {
    Rat r(b, c * c * c);
    r.canonicalize();
    return r;
}

Int ProjPoint::height() const {
    Int aa = abs(a);
    Int c2 = c * c;
    return aa > c2 ? aa : c2;
}

bool on_curve(const MordellCurve& curve, const ProjPoint& p) {
    return p.b * p.b == p.a * p.a * p.a + curve.m * pow_int(p.c, 6);
}

ProjPoint make_point(const MordellCurve& curve, Int a, Int b, Int c) {
    if (c < 1) throw std::domain_error("make_point: c must be positive");
    if (gcd(a, c) != 1 || gcd(b, c) != 1) {
        throw std::domain_error("make_point: coordinates not in lowest terms");
    }
    ProjPoint p{std::move(a), std::move(b), std::move(c)};
    if (!on_curve(curve, p)) {
        throw std::domain_error("make_point: (" + p.a.get_str() + ", " + p.b.get_str() + ", " +
                                p.c.get_str() + ") is not on y^2 = x^3 + " + curve.m.get_str());
    }
    return p;
}

ProjPoint point_from_xy(const MordellCurve& curve, const Rat& x, const Rat& y) {
    Int xden(x.get_den());
    if (!is_perfect_square(xden)) {
        throw std::domain_error("point_from_xy: x denominator is not a square");
    }
    Int c = isqrt(xden);
    if (Int(y.get_den()) != c * c * c) {
        throw std::domain_error("point_from_xy: y denominator does not match x");
    }
    return make_point(curve, Int(x.get_num()), Int(y.get_num()), c);
}

ProjPoint negate(const ProjPoint& p) { return {p.a, -p.b, p.c}; }

const char* to_string(TorsionTag t) {
    switch (t) {
        case TorsionTag::Z6: return "Z6";
        case TorsionTag::Z3: return "Z3";
        case TorsionTag::Z2: return "Z2";
        case TorsionTag::Trivial: return "Trivial";
    }
    return "?";
}

TorsionClass torsion_class(const MordellCurve& curve) {
    const Int& m = curve.m;
    if (canonicalize(m).t != 1) {
        throw std::domain_error("torsion_class: m = " + m.get_str() + " is not sixth-power-free");
    }
    TorsionClass tc;
    auto pt = [&](long a, const Int& b) { return make_point(curve, Int(a), b, Int(1)); };
    if (m == 1) {
        tc.tag = TorsionTag::Z6;
        tc.points = {pt(2, Int(3)), pt(2, Int(-3)), pt(0, Int(1)), pt(0, Int(-1)), pt(-1, Int(0))};
    } else if (m == -432) {
        tc.tag = TorsionTag::Z3;
        tc.points = {make_point(curve, Int(12), Int(36), Int(1)),
                     make_point(curve, Int(12), Int(-36), Int(1))};
    } else if (m > 1 && is_perfect_square(m)) {
        // (0, s) doubles to (0, -s): order 3.
        Int s = isqrt(m);
        tc.tag = TorsionTag::Z3;
        tc.points = {make_point(curve, Int(0), s, Int(1)), make_point(curve, Int(0), -s, Int(1))};
    } else {
        Int r;
        if (mpz_root(r.get_mpz_t(), m.get_mpz_t(), 3) != 0) {
            // (-r, 0) has y = 0: order 2.
            tc.tag = TorsionTag::Z2;
            tc.points = {make_point(curve, Int(-r), Int(0), Int(1))};
        } else {
            tc.tag = TorsionTag::Trivial;
        }
    }
    return tc;
}

std::optional<ProjPoint> double_point(const MordellCurve& curve,
                                      const std::optional<ProjPoint>& p) {
    if (!p) return std::nullopt;
    if (!on_curve(curve, *p)) throw std::domain_error("double_point: point not on curve");
    if (p->b == 0) return std::nullopt;

    Rat x = p->x();
    Rat y = p->y();
    Rat x2 = x * x;
    Rat x3 = x2 * x;
    Rat y2 = y * y;
    Rat xd = (9 * x2 * x2 - 8 * y2 * x) / (4 * y2);
    Rat yd = (-27 * x3 * x3 + 36 * y2 * x3 - 8 * y2 * y2) / (8 * y2 * y);
    return point_from_xy(curve, xd, yd);
}

std::optional<int> small_order(const MordellCurve& curve, const ProjPoint& p) {
    if (p.b == 0) return 2;
    std::optional<ProjPoint> q = double_point(curve, p);
    if (!q) return 2;
    if (*q == negate(p)) return 3;
    std::optional<ProjPoint> q2 = double_point(curve, q);
    if (q2 && *q2 == negate(*q)) return 6;  // [2]P of order 3 and P not of order 3
    return std::nullopt;
}

std::vector<ProjPoint> search_points(const MordellCurve& curve, const Int& height_bound) {
    if (height_bound < 1) throw std::domain_error("search_points: height bound must be >= 1");
    std::vector<ProjPoint> out;
    for (Int c = 1; c * c <= height_bound; ++c) {
        Int mc6 = curve.m * pow_int(c, 6);
        for (Int a = -height_bound; a <= height_bound; ++a) {
            if (gcd(a, c) != 1) continue;
            Int rhs = a * a * a + mc6;
            if (rhs < 0 || !is_perfect_square(rhs)) continue;
            Int b = isqrt(rhs);
            out.push_back(make_point(curve, a, b, c));
            if (b != 0) out.push_back(make_point(curve, a, -b, c));
        }
    }
    return out;
}

std::vector<SolutionTriple> search_descent(const Int& K, const Int& z_bound,
                                           const Int& x_bound,
                                           const DescentConstraints& constraints) {
    if (K == 0) throw std::domain_error("search_descent: K must be nonzero");
    if (z_bound < 1 || x_bound < 1) throw std::domain_error("search_descent: bounds must be >= 1");
    std::vector<SolutionTriple> out;
    for (Int z = 1; z <= z_bound; ++z) {
        Int kz6 = K * pow_int(z, 6);
        for (Int x = -x_bound; x <= x_bound; ++x) {
            Int rhs = x * x * x + kz6;
            if (rhs <= 0 || !is_perfect_square(rhs)) continue;  // y > 0
            Int y = isqrt(rhs);
            if (constraints.coprime_xyz && gcd(gcd(x, y), z) != 1) continue;
            if (constraints.coprime_y_with && gcd(y, *constraints.coprime_y_with) != 1) continue;
            out.push_back({x, y, z});
        }
    }
    return out;
}

ValuationProfile valuation_profile(const MordellCurve& curve, const ProjPoint& p) {
    if (!on_curve(curve, p)) throw std::domain_error("valuation_profile: point not on curve");
    Factorization f = factor_trial(abs(3 * curve.m));
    if (!f.complete) {
        throw IncompleteFactorization("valuation_profile: cannot factor 3m for m = " +
                                      curve.m.get_str());
    }
    ValuationProfile vp;
    vp.all_positive = true;
    Rat y = p.y();
    for (const auto& [prime, e] : f.factors) {
        std::optional<long> v = valuation(prime, y);
        vp.ord_y.emplace_back(prime, v);
        if (v && *v < 1) vp.all_positive = false;
    }
    return vp;
}

}  // namespace twistrank
