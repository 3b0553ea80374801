#pragma once

#include <vector>

#include "twistrank/intkit.hpp"
#include "twistrank/pell.hpp"

namespace twistrank {

struct FundamentalDiscriminant {
    Int delta;
    Int field_radicand;  // squarefree m with delta = m (m ≡ 1 mod 4) or 4m
};

/// Discriminant of Q(sqrt(m)) for squarefree m != 0, 1.
FundamentalDiscriminant fundamental_discriminant(const Int& m);

/// Validates delta and recovers the radicand.
FundamentalDiscriminant discriminant_from_delta(const Int& delta);

/// Primitive reduced binary quadratic form a*x^2 + b*x*y + c*y^2.
struct ReducedForm {
    Int a, b, c;
};

enum class ClassNumberMethod { forms, dirichlet_sum, analytic, cycles };
const char* to_string(ClassNumberMethod m);

struct ClassNumberResult {
    FundamentalDiscriminant delta;
    Int h;
    ClassNumberMethod method;
    int h_mod_3 = 0;
};

/// All reduced primitive forms of a negative fundamental discriminant,
/// each class exactly once (|b| <= a <= c, b > -a, b >= 0 when a = c).
std::vector<ReducedForm> reduced_imaginary_forms(const FundamentalDiscriminant& delta);

/// h as the count of reduced forms. Production path for imaginary fields.
ClassNumberResult h_imaginary_forms(const FundamentalDiscriminant& delta);

/// h = -(1/|delta|) * sum_{a=1}^{|delta|-1} (delta/a) * a, exact integer
/// arithmetic. Independent cross-check of the forms count; delta < -4 only
/// (the unit count w != 2 breaks the formula at -3 and -4).
ClassNumberResult h_imaginary_dirichlet(const FundamentalDiscriminant& delta);

/// h = round(-sum (delta/a) ln sin(pi a/delta) / (2 ln eps)) computed with
/// escalating MPFR precision (60 bits doubled up to four times). Accepts
/// only when the pre-rounding value sits within 0.05 of an integer, else
/// throws PrecisionError. Requires delta = 4 * unit.d.
ClassNumberResult h_real_analytic(const FundamentalDiscriminant& delta,
                                  const FundamentalUnit& unit);

/// Narrow class number h+ of a positive fundamental discriminant: the
/// number of cycles of reduced indefinite forms under the rho walk.
/// Equals h when norm(eps) = -1 and 2h when norm(eps) = +1.
Int h_real_cycles(const FundamentalDiscriminant& delta);

/// Checks the reflection consequence on D: 3 ∤ h(Q(sqrt(-2D))) must imply
/// 3 ∤ h(Q(sqrt(k))) for k the squarefree kernel of 6D.
struct ScholzReport {
    Int D;
    Int kernel;            // squarefree kernel of 6D
    bool kernel_reduced;   // true when 3 | D (radicand collapsed by 9)
    int h_im_mod3;
    int h_re_mod3;
    bool implication_holds;
};
ScholzReport scholz_consistent(const Int& D);

}  // namespace twistrank
