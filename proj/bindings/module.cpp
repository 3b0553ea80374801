#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>

#include "twistrank/errors.hpp"
#include "twistrank/scan.hpp"

namespace py = pybind11;
using namespace twistrank;

namespace pybind11 {
namespace detail {

// mpz_class <-> python int, exact via decimal strings.
template <>
struct type_caster<mpz_class> {
public:
    PYBIND11_TYPE_CASTER(mpz_class, const_name("int"));

    bool load(handle src, bool) {
        if (!isinstance<int_>(src)) return false;
        try {
            value = mpz_class(str(src).cast<std::string>());
        } catch (const std::invalid_argument&) {
            return false;
        }
        return true;
    }

    static handle cast(const mpz_class& v, return_value_policy, handle) {
        return PyLong_FromString(v.get_str().c_str(), nullptr, 10);
    }
};

}  // namespace detail
}  // namespace pybind11

namespace {

TheoremId theorem_from_int(int t) {
    if (t == 1) return TheoremId::one;
    if (t == 2) return TheoremId::two;
    throw std::domain_error("theorem must be 1 or 2");
}

ScanConfig make_config(const Int& d_min, const Int& d_max, const std::string& theorem,
                       bool audit, const Int& height, const Int& zbound,
                       const std::string& fmt, const std::optional<std::string>& cache,
                       unsigned jobs) {
    ScanConfig cfg;
    cfg.d_min = d_min;
    cfg.d_max = d_max;
    if (theorem == "1" || theorem == "one") {
        cfg.mode = TheoremMode::one;
    } else if (theorem == "2" || theorem == "two") {
        cfg.mode = TheoremMode::two;
    } else if (theorem == "both") {
        cfg.mode = TheoremMode::both;
    } else {
        throw std::domain_error("theorem must be '1', '2' or 'both'");
    }
    cfg.audit = audit;
    cfg.height_bound = height;
    cfg.z_bound = zbound;
    if (fmt == "jsonl") {
        cfg.format = OutputFormat::jsonl;
    } else if (fmt == "csv") {
        cfg.format = OutputFormat::csv;
    } else {
        throw std::domain_error("format must be 'jsonl' or 'csv'");
    }
    cfg.cache_path = cache;
    cfg.jobs = jobs;
    return cfg;
}

py::dict stats_dict(const SummaryStats& st) {
    py::dict d;
    d["counted"] = st.counted;
    d["eligible"] = st.eligible;
    d["certified"] = st.certified;
    d["h_im_not_div3"] = st.h_im_not_div3;
    d["observed_proportion"] = st.observed_proportion;
    d["cohen_lenstra_reference"] = st.cohen_lenstra_reference;
    d["audit_findings"] = st.audit_findings;
    d["computed"] = st.computed;
    d["from_cache"] = st.from_cache;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "exact rank-zero twist certificates, class numbers and audits for y^2 = x^3 + 2";
    m.attr("__version__") = "0.1.0";

    py::register_exception<IncompleteFactorization>(m, "IncompleteFactorization",
                                                    PyExc_ArithmeticError);
    py::register_exception<PrecisionError>(m, "PrecisionError", PyExc_ArithmeticError);
    py::register_exception<CacheError>(m, "CacheError", PyExc_ValueError);

    // ---- intkit ----
    py::class_<Factorization>(m, "Factorization")
        .def_readonly("n", &Factorization::n)
        .def_readonly("factors", &Factorization::factors)
        .def_readonly("complete", &Factorization::complete)
        .def("cofactor", &Factorization::cofactor);

    m.def("isqrt", &isqrt, py::arg("n"));
    m.def("is_perfect_square", &is_perfect_square, py::arg("n"));
    m.def("is_prime", &is_prime, py::arg("n"));
    m.def("factor_trial", &factor_trial, py::arg("n"), py::arg("bound") = Int(kDefaultTrialBound));
    m.def("is_squarefree", &is_squarefree, py::arg("n"),
          py::arg("bound") = Int(kDefaultTrialBound));
    m.def("squarefree_kernel", &squarefree_kernel, py::arg("n"),
          py::arg("bound") = Int(kDefaultTrialBound));
    m.def("kronecker", [](const Int& delta, const Int& a) { return kronecker(delta, a); },
          py::arg("delta"), py::arg("a"));
    m.def(
        "valuation",
        [](const Int& p, const Int& num, const Int& den) {
            if (den == 0) throw std::domain_error("valuation: zero denominator");
            Rat q(num, den);
            q.canonicalize();
            return valuation(p, q);
        },
        py::arg("p"), py::arg("num"), py::arg("den") = Int(1),
        "ord_p(num/den); None encodes +infinity");

    // ---- pell ----
    py::class_<ContinuedFraction>(m, "ContinuedFraction")
        .def_readonly("n", &ContinuedFraction::n)
        .def_readonly("a0", &ContinuedFraction::a0)
        .def_readonly("period", &ContinuedFraction::period);

    py::class_<FundamentalUnit>(m, "FundamentalUnit")
        .def_readonly("d", &FundamentalUnit::d)
        .def_readonly("T", &FundamentalUnit::T)
        .def_readonly("U", &FundamentalUnit::U)
        .def_readonly("norm", &FundamentalUnit::norm)
        .def("__repr__", [](const FundamentalUnit& u) {
            return "FundamentalUnit(d=" + u.d.get_str() + ", T=" + u.T.get_str() +
                   ", U=" + u.U.get_str() + ", norm=" + std::to_string(u.norm) + ")";
        });

    m.def("cf_sqrt", &cf_sqrt, py::arg("n"));
    m.def("fundamental_unit", &fundamental_unit, py::arg("d"));
    m.def("unit_residues", &unit_residues, py::arg("unit"));

    // ---- classno ----
    py::class_<FundamentalDiscriminant>(m, "FundamentalDiscriminant")
        .def_readonly("delta", &FundamentalDiscriminant::delta)
        .def_readonly("field_radicand", &FundamentalDiscriminant::field_radicand);

    py::class_<ClassNumberResult>(m, "ClassNumberResult")
        .def_property_readonly("delta",
                               [](const ClassNumberResult& r) { return r.delta.delta; })
        .def_property_readonly("field_radicand",
                               [](const ClassNumberResult& r) { return r.delta.field_radicand; })
        .def_readonly("h", &ClassNumberResult::h)
        .def_property_readonly(
            "method", [](const ClassNumberResult& r) { return std::string(to_string(r.method)); })
        .def_readonly("h_mod_3", &ClassNumberResult::h_mod_3);

    py::class_<ScholzReport>(m, "ScholzReport")
        .def_readonly("D", &ScholzReport::D)
        .def_readonly("kernel", &ScholzReport::kernel)
        .def_readonly("kernel_reduced", &ScholzReport::kernel_reduced)
        .def_readonly("h_im_mod3", &ScholzReport::h_im_mod3)
        .def_readonly("h_re_mod3", &ScholzReport::h_re_mod3)
        .def_readonly("implication_holds", &ScholzReport::implication_holds);

    m.def("fundamental_discriminant", &fundamental_discriminant, py::arg("m"));
    m.def("h_imaginary_forms",
          [](const Int& delta) { return h_imaginary_forms(discriminant_from_delta(delta)); },
          py::arg("delta"));
    m.def("h_imaginary_dirichlet",
          [](const Int& delta) { return h_imaginary_dirichlet(discriminant_from_delta(delta)); },
          py::arg("delta"));
    m.def(
        "h_real_analytic",
        [](const Int& delta) {
            FundamentalDiscriminant fd = discriminant_from_delta(delta);
            return h_real_analytic(fd, fundamental_unit(fd.field_radicand));
        },
        py::arg("delta"));
    m.def("h_real_cycles",
          [](const Int& delta) { return h_real_cycles(discriminant_from_delta(delta)); },
          py::arg("delta"));
    m.def("scholz_consistent", &scholz_consistent, py::arg("D"));

    // ---- mordell ----
    py::class_<MordellCurve>(m, "MordellCurve")
        .def_readonly("m_raw", &MordellCurve::m_raw)
        .def_readonly("m", &MordellCurve::m)
        .def_readonly("t", &MordellCurve::t)
        .def("__repr__", [](const MordellCurve& c) {
            return "MordellCurve(m_raw=" + c.m_raw.get_str() + ", m=" + c.m.get_str() +
                   ", t=" + c.t.get_str() + ")";
        });

    py::class_<ProjPoint>(m, "ProjPoint")
        .def_readonly("a", &ProjPoint::a)
        .def_readonly("b", &ProjPoint::b)
        .def_readonly("c", &ProjPoint::c)
        .def_property_readonly("x", [](const ProjPoint& p) { return p.x().get_str(); })
        .def_property_readonly("y", [](const ProjPoint& p) { return p.y().get_str(); })
        .def("height", &ProjPoint::height)
        .def("__eq__", [](const ProjPoint& p, const ProjPoint& q) { return p == q; })
        .def("__repr__", [](const ProjPoint& p) {
            return "ProjPoint(a=" + p.a.get_str() + ", b=" + p.b.get_str() +
                   ", c=" + p.c.get_str() + ")";
        });

    py::class_<TorsionClass>(m, "TorsionClass")
        .def_property_readonly(
            "tag", [](const TorsionClass& t) { return std::string(to_string(t.tag)); })
        .def_readonly("points", &TorsionClass::points);

    py::class_<SolutionTriple>(m, "SolutionTriple")
        .def_readonly("x", &SolutionTriple::x)
        .def_readonly("y", &SolutionTriple::y)
        .def_readonly("z", &SolutionTriple::z)
        .def("__repr__", [](const SolutionTriple& t) {
            return "SolutionTriple(x=" + t.x.get_str() + ", y=" + t.y.get_str() +
                   ", z=" + t.z.get_str() + ")";
        });

    m.def("canonicalize", &canonicalize, py::arg("m_raw"));
    m.def("torsion_class", [](const Int& m_raw) { return torsion_class(canonicalize(m_raw)); },
          py::arg("m"), "torsion of y^2 = x^3 + m after sixth-power canonicalization");
    m.def(
        "point",
        [](const Int& m, const Int& a, const Int& b, const Int& c) {
            return make_point(canonicalize(m), a, b, c);
        },
        py::arg("m"), py::arg("a"), py::arg("b"), py::arg("c"),
        "validated point x = a/c^2, y = b/c^3 on the canonical curve");
    m.def(
        "double_point",
        [](const Int& m, const Int& a, const Int& b, const Int& c) {
            MordellCurve curve = canonicalize(m);
            return double_point(curve, make_point(curve, a, b, c));
        },
        py::arg("m"), py::arg("a"), py::arg("b"), py::arg("c"),
        "[2]P; None is the point at infinity");
    m.def(
        "search_points",
        [](const Int& m, const Int& height) { return search_points(canonicalize(m), height); },
        py::arg("m"), py::arg("height"));
    m.def(
        "search_descent",
        [](const Int& k, const Int& z_bound, const Int& x_bound, bool coprime_xyz,
           const std::optional<Int>& coprime_y_with) {
            DescentConstraints cons;
            cons.coprime_xyz = coprime_xyz;
            cons.coprime_y_with = coprime_y_with;
            return search_descent(k, z_bound, x_bound, cons);
        },
        py::arg("k"), py::arg("z_bound"), py::arg("x_bound"), py::arg("coprime_xyz") = true,
        py::arg("coprime_y_with") = std::nullopt);
    m.def(
        "valuation_profile",
        [](const Int& m, const Int& a, const Int& b, const Int& c) {
            MordellCurve curve = canonicalize(m);
            ValuationProfile vp = valuation_profile(curve, make_point(curve, a, b, c));
            return py::make_tuple(vp.ord_y, vp.all_positive);
        },
        py::arg("m"), py::arg("a"), py::arg("b"), py::arg("c"),
        "([(p, ord_p(y) or None), ...], all_ord_at_least_1)");

    // ---- criteria ----
    py::class_<Certificate>(m, "Certificate")
        .def_readonly("D", &Certificate::D)
        .def_property_readonly(
            "theorem", [](const Certificate& c) { return std::string(to_string(c.theorem)); })
        .def_readonly("eligible", &Certificate::is_eligible)
        .def_readonly("reason", &Certificate::reason)
        .def_readonly("delta_im", &Certificate::delta_im)
        .def_readonly("kernel_re", &Certificate::kernel_re)
        .def_readonly("kernel_reduced", &Certificate::kernel_reduced)
        .def_readonly("h_im", &Certificate::h_im)
        .def_readonly("h_re", &Certificate::h_re)
        .def_readonly("T", &Certificate::T)
        .def_readonly("U", &Certificate::U)
        .def_readonly("T_mod3", &Certificate::T_mod3)
        .def_readonly("U_mod3", &Certificate::U_mod3)
        .def_readonly("cond_I", &Certificate::cond_I)
        .def_readonly("cond_II", &Certificate::cond_II)
        .def_property_readonly("verdict",
                               [](const Certificate& c) -> std::optional<std::string> {
                                   if (!c.verdict) return std::nullopt;
                                   return std::string(to_string(*c.verdict));
                               })
        .def_readonly("error", &Certificate::error);

    py::class_<AacReport>(m, "AacReport")
        .def_readonly("D", &AacReport::D)
        .def_readonly("q", &AacReport::q)
        .def_readonly("d_kernel", &AacReport::d_kernel)
        .def_readonly("h_minus_q", &AacReport::h_minus_q)
        .def_readonly("h_d", &AacReport::h_d)
        .def_readonly("T", &AacReport::T)
        .def_readonly("U", &AacReport::U)
        .def_readonly("residue_plus", &AacReport::residue_plus)
        .def_readonly("residue_minus", &AacReport::residue_minus)
        .def_readonly("plus_congruence_holds", &AacReport::plus_congruence_holds);

    py::class_<AuditFinding>(m, "AuditFinding")
        .def_readonly("curve_m", &AuditFinding::curve_m)
        .def_readonly("descent_k", &AuditFinding::descent_k)
        .def_property_readonly(
            "kind", [](const AuditFinding& f) { return std::string(to_string(f.kind)); })
        .def_readonly("point", &AuditFinding::point)
        .def_readonly("triple", &AuditFinding::triple);

    m.def(
        "eligible",
        [](const Int& D, int theorem) {
            Eligibility e = eligible(D, theorem_from_int(theorem));
            return py::make_tuple(e.ok, e.reason);
        },
        py::arg("D"), py::arg("theorem") = 1);
    m.def("twist_curves", &twist_curves, py::arg("D"));
    m.def(
        "certify", [](const Int& D, int theorem) { return evaluate(D, theorem_from_int(theorem)); },
        py::arg("D"), py::arg("theorem") = 1);
    m.def("aac_residue", &aac_residue, py::arg("D"));
    m.def("audit", &audit, py::arg("certificate"), py::arg("height") = Int(100),
          py::arg("zbound") = Int(3));

    // ---- scan ----
    m.def(
        "certify_record",
        [](const Int& D, const std::string& theorem, bool with_audit, const Int& height,
           const Int& zbound) {
            ScanConfig cfg = make_config(Int(1), Int(1), theorem, with_audit, height, zbound,
                                         "jsonl", std::nullopt, 1);
            return build_record(D, cfg).dump();
        },
        py::arg("D"), py::arg("theorem") = "1", py::arg("audit") = false,
        py::arg("height") = Int(100), py::arg("zbound") = Int(3),
        "single-D record as a JSON line, same schema as scan output");
    m.def(
        "scan",
        [](const Int& d_min, const Int& d_max, const std::string& theorem, bool with_audit,
           const Int& height, const Int& zbound, const std::string& fmt,
           const std::optional<std::string>& cache, unsigned jobs) {
            ScanConfig cfg =
                make_config(d_min, d_max, theorem, with_audit, height, zbound, fmt, cache, jobs);
            std::ostringstream out;
            SummaryStats st = run_scan(cfg, out);
            return py::make_tuple(out.str(), stats_dict(st));
        },
        py::arg("d_min"), py::arg("d_max"), py::arg("theorem") = "both",
        py::arg("audit") = false, py::arg("height") = Int(100), py::arg("zbound") = Int(3),
        py::arg("format") = "jsonl", py::arg("cache") = std::nullopt, py::arg("jobs") = 1,
        "returns (output_text, stats). Records stream in ascending D; summary last.");
    m.def("cohen_lenstra_reference", &cohen_lenstra_reference);
}
