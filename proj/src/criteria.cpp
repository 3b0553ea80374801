#include "twistrank/criteria.hpp"

#include <algorithm>
#include <stdexcept>

#include "twistrank/errors.hpp"

namespace twistrank {

const char* to_string(TheoremId t) {
    return t == TheoremId::one ? "one" : "two";
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::certified_rank_zero_claim: return "certified_rank_zero_claim";
        case Verdict::conditions_fail: return "conditions_fail";
        case Verdict::not_applicable: return "not_applicable";
    }
    return "?";
}

const char* to_string(FindingKind k) {
    return k == FindingKind::nontorsion_point ? "nontorsion_point" : "descent_solution";
}

Eligibility eligible(const Int& D, TheoremId theorem) {
    if (D <= 0) return {false, "D must be a positive integer"};
    if (mpz_even_p(D.get_mpz_t())) return {false, "D = " + D.get_str() + " is even"};
    if (!is_squarefree(D)) return {false, "D = " + D.get_str() + " is not squarefree"};
    if (D == 3) return {false, "D=3 excluded"};
    if (theorem == TheoremId::two) {
        int r = mod3(D);
        if (r != 2) {
            return {false, D.get_str() + " ≡ " + std::to_string(r) + " mod 3"};
        }
    }
    return {true, ""};
}

std::pair<MordellCurve, MordellCurve> twist_curves(const Int& D) {
    if (D < 1) throw std::domain_error("twist_curves: D must be positive");
    Int d3 = D * D * D;
    return {canonicalize(Int(-2 * d3)), canonicalize(Int(54 * d3))};
}

Invariants compute_invariants(const Int& D) {
    if (D < 1 || mpz_even_p(D.get_mpz_t()) || !is_squarefree(D)) {
        throw std::domain_error("compute_invariants: D must be an odd squarefree positive integer");
    }
    Invariants inv;
    inv.delta_im = -8 * D;
    Int six_d = 6 * D;
    inv.kernel = squarefree_kernel(six_d);
    inv.kernel_reduced = (inv.kernel != six_d);
    inv.h_im = h_imaginary_forms(discriminant_from_delta(inv.delta_im)).h;
    inv.unit = fundamental_unit(inv.kernel);
    inv.h_re = h_real_analytic(fundamental_discriminant(inv.kernel), inv.unit).h;
    return inv;
}

Certificate evaluate_with(const Int& D, TheoremId theorem, const Invariants& inv) {
    Certificate cert;
    cert.D = D;
    cert.theorem = theorem;
    Eligibility e = eligible(D, theorem);
    cert.is_eligible = e.ok;
    cert.reason = e.reason;
    if (!e.ok) {
        cert.verdict = Verdict::not_applicable;
        return cert;
    }
    cert.delta_im = inv.delta_im;
    cert.kernel_re = inv.kernel;
    cert.kernel_reduced = inv.kernel_reduced;
    cert.h_im = inv.h_im;
    cert.h_re = inv.h_re;
    cert.T = inv.unit.T;
    cert.U = inv.unit.U;
    cert.T_mod3 = mod3(cert.T);
    cert.U_mod3 = mod3(cert.U);
    cert.cond_I = mod3(cert.h_im) != 0;
    cert.cond_II = cert.T_mod3 != 0 && cert.U_mod3 != 0;
    bool holds = (theorem == TheoremId::one) ? (cert.cond_I && cert.cond_II) : cert.cond_I;
    cert.verdict = holds ? Verdict::certified_rank_zero_claim : Verdict::conditions_fail;
    return cert;
}

Certificate error_certificate(const Int& D, TheoremId theorem, const std::string& message) {
    Certificate cert;
    cert.D = D;
    cert.theorem = theorem;
    Eligibility e = eligible(D, theorem);
    cert.is_eligible = e.ok;
    cert.reason = e.reason;
    cert.error = message;
    cert.verdict = std::nullopt;  // withheld
    return cert;
}

Certificate evaluate(const Int& D, TheoremId theorem) {
    Eligibility e = eligible(D, theorem);
    if (!e.ok) {
        Certificate cert;
        cert.D = D;
        cert.theorem = theorem;
        cert.is_eligible = false;
        cert.reason = e.reason;
        cert.verdict = Verdict::not_applicable;
        return cert;
    }
    try {
        return evaluate_with(D, theorem, compute_invariants(D));
    } catch (const ComputationError& ex) {
        return error_certificate(D, theorem, ex.what());
    }
}

Certificate theorem1(const Int& D) { return evaluate(D, TheoremId::one); }
Certificate theorem2(const Int& D) { return evaluate(D, TheoremId::two); }

AacReport aac_from(const Int& D, const Invariants& inv) {
    AacReport r;
    r.D = D;
    r.q = 2 * D;
    r.d_kernel = inv.kernel;
    r.h_minus_q = inv.h_im;
    r.h_d = inv.h_re;
    r.T = inv.unit.T;
    r.U = inv.unit.U;
    r.residue_plus = mod3(r.T * r.h_minus_q + r.U * r.h_d);
    r.residue_minus = mod3(r.T * r.h_minus_q - r.U * r.h_d);
    r.plus_congruence_holds = (r.residue_plus == 0);
    return r;
}

AacReport aac_residue(const Int& D) {
    if (D < 1 || mpz_even_p(D.get_mpz_t()) || !is_squarefree(D)) {
        throw std::domain_error("aac_residue: D must be an odd squarefree positive integer");
    }
    int r = mod3(D);
    if (r != 2) {
        throw std::domain_error("aac_residue: D ≡ " + std::to_string(r) + " mod 3, need 2");
    }
    return aac_from(D, compute_invariants(D));
}

std::vector<AuditFinding> audit(const Certificate& cert, const Int& height_bound,
                                const Int& z_bound) {
    if (!cert.verdict || *cert.verdict != Verdict::certified_rank_zero_claim) {
        throw std::domain_error("audit: certificate verdict must be certified_rank_zero_claim");
    }
    if (height_bound < 1 || z_bound < 1) {
        throw std::domain_error("audit: bounds must be >= 1");
    }
    auto [minus_curve, plus_curve] = twist_curves(cert.D);
    std::vector<AuditFinding> findings;

    for (const MordellCurve* curve : {&minus_curve, &plus_curve}) {
        TorsionClass tor = torsion_class(*curve);
        for (const ProjPoint& pt : search_points(*curve, height_bound)) {
            if (pt.b < 0) continue;  // one representative per ± pair
            if (std::find(tor.points.begin(), tor.points.end(), pt) != tor.points.end()) continue;
            AuditFinding f;
            f.curve_m = curve->m;
            f.descent_k = curve->m_raw;
            f.kind = FindingKind::nontorsion_point;
            f.point = pt;
            findings.push_back(std::move(f));
        }
    }

    DescentConstraints cons;
    cons.coprime_xyz = true;
    cons.coprime_y_with = cert.D;
    for (const MordellCurve* curve : {&minus_curve, &plus_curve}) {
        for (const SolutionTriple& sol : search_descent(curve->m_raw, z_bound, height_bound, cons)) {
            AuditFinding f;
            f.curve_m = curve->m;
            f.descent_k = curve->m_raw;
            f.kind = FindingKind::descent_solution;
            f.triple = sol;
            findings.push_back(std::move(f));
        }
    }
    return findings;
}

}  // namespace twistrank
