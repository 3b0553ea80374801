#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "twistrank/classno.hpp"
#include "twistrank/mordell.hpp"
#include "twistrank/pell.hpp"

namespace twistrank {

enum class TheoremId { one, two };
enum class Verdict { certified_rank_zero_claim, conditions_fail, not_applicable };
const char* to_string(TheoremId t);
const char* to_string(Verdict v);

struct Eligibility {
    bool ok;
    std::string reason;  // empty when ok
};

/// Theorem one: D positive, odd, squarefree, D != 3.
/// Theorem two: additionally D ≡ 2 (mod 3). Ineligibility is a value.
Eligibility eligible(const Int& D, TheoremId theorem);

/// The two twisted curves in canonical Mordell form:
/// y^2 = x^3 - 2D^3 and y^2 = x^3 + 54D^3.
std::pair<MordellCurve, MordellCurve> twist_curves(const Int& D);

/// Everything the certificates and reports share for one D.
struct Invariants {
    Int delta_im;         // -8D
    Int kernel;           // squarefree kernel of 6D
    bool kernel_reduced;  // true when 3 | D
    Int h_im;             // class number of Q(sqrt(-2D))
    FundamentalUnit unit; // fundamental unit of Q(sqrt(kernel))
    Int h_re;             // class number of Q(sqrt(kernel))
};

/// Requires D odd, squarefree, positive.
Invariants compute_invariants(const Int& D);

struct Certificate {
    Int D;
    TheoremId theorem = TheoremId::one;
    bool is_eligible = false;
    std::string reason;  // why ineligible
    Int delta_im;
    Int kernel_re;
    bool kernel_reduced = false;
    Int h_im, h_re;
    Int T, U;
    int T_mod3 = 0, U_mod3 = 0;
    bool cond_I = false;   // 3 ∤ h_im
    bool cond_II = false;  // 3 ∤ T and 3 ∤ U
    std::optional<Verdict> verdict;  // nullopt: withheld after an error
    std::string error;
};

Certificate theorem1(const Int& D);
Certificate theorem2(const Int& D);
Certificate evaluate(const Int& D, TheoremId theorem);
Certificate evaluate_with(const Int& D, TheoremId theorem, const Invariants& inv);
Certificate error_certificate(const Int& D, TheoremId theorem, const std::string& message);

/// Congruence report on T*h(-q) ± U*h(d) mod 3 for q = 2D, d = 6D.
/// Both residues are recorded; neither is asserted.
struct AacReport {
    Int D, q, d_kernel;
    Int h_minus_q, h_d;
    Int T, U;
    int residue_plus = 0;
    int residue_minus = 0;
    bool plus_congruence_holds = false;
};

/// Requires D odd squarefree positive with D ≡ 2 (mod 3).
AacReport aac_residue(const Int& D);
AacReport aac_from(const Int& D, const Invariants& inv);

enum class FindingKind { nontorsion_point, descent_solution };
const char* to_string(FindingKind k);

/// A concrete witness contradicting a certified claim. Point witnesses are
/// recorded once per ± pair with b >= 0; the negation is implied.
struct AuditFinding {
    Int curve_m;    // canonical m of the audited curve
    Int descent_k;  // raw constant of the descent equation
    FindingKind kind;
    std::optional<ProjPoint> point;
    std::optional<SolutionTriple> triple;
};

/// Searches both twist curves for non-torsion points up to height_bound and
/// for descent solutions with z <= z_bound, |x| <= height_bound under the
/// gcd(x,y,z) = 1 and gcd(y,D) = 1 constraints. Requires a certificate with
/// verdict certified_rank_zero_claim. Empty result = audit passed at these
/// bounds.
std::vector<AuditFinding> audit(const Certificate& cert, const Int& height_bound,
                                const Int& z_bound);

}  // namespace twistrank
