// twistrank: exact-arithmetic toolkit for the rank-zero twist criteria on
// y^2 = x^3 + 2. Subcommands mirror the library surface; see README.md.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "twistrank/errors.hpp"
#include "twistrank/scan.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace twistrank;

Int parse_int(const std::string& s) {
    try {
        return Int(s);
    } catch (const std::invalid_argument&) {
        throw std::domain_error("not an integer: " + s);
    }
}

std::string dec(const Int& v) { return v.get_str(); }

void print_json(const json& j) {
    std::cout << j.dump(2) << '\n';
    std::cout.flush();
}

json unit_json(const FundamentalUnit& u) {
    return json{{"d", dec(u.d)}, {"T", dec(u.T)}, {"U", dec(u.U)}, {"norm", u.norm}};
}

json point_json_xy(const MordellCurve& curve, const ProjPoint& p) {
    json j;
    j["a"] = dec(p.a);
    j["b"] = dec(p.b);
    j["c"] = dec(p.c);
    j["x"] = p.x().get_str();
    j["y"] = p.y().get_str();
    if (std::optional<int> ord = small_order(curve, p)) j["order"] = *ord;
    return j;
}

int run_pell(const std::string& n_str) {
    Int n = parse_int(n_str);
    ContinuedFraction cf = cf_sqrt(n);
    json j;
    j["n"] = dec(n);
    j["a0"] = dec(cf.a0);
    json period = json::array();
    for (const Int& t : cf.period) period.push_back(dec(t));
    j["period"] = period;
    j["period_length"] = cf.period.size();
    try {
        FundamentalUnit u = fundamental_unit(n);
        j["unit"] = unit_json(u);
        auto [t3, u3] = unit_residues(u);
        j["unit"]["T_mod3"] = t3;
        j["unit"]["U_mod3"] = u3;
    } catch (const std::domain_error& e) {
        j["unit"] = nullptr;
        j["unit_error"] = e.what();
    }
    print_json(j);
    return 0;
}

int run_classno(const std::string& delta_str) {
    Int delta = parse_int(delta_str);
    FundamentalDiscriminant fd = discriminant_from_delta(delta);
    json j;
    j["delta"] = dec(fd.delta);
    j["field_radicand"] = dec(fd.field_radicand);
    if (delta < 0) {
        ClassNumberResult forms = h_imaginary_forms(fd);
        j["forms"] = json{{"h", dec(forms.h)}, {"h_mod_3", forms.h_mod_3}};
        if (delta < -4) {
            ClassNumberResult dirichlet = h_imaginary_dirichlet(fd);
            j["dirichlet"] = json{{"h", dec(dirichlet.h)}, {"h_mod_3", dirichlet.h_mod_3}};
            j["agree"] = (forms.h == dirichlet.h);
        } else {
            j["dirichlet"] = nullptr;
            j["note"] = "dirichlet sum requires delta < -4";
        }
    } else {
        Int h_plus = h_real_cycles(fd);
        j["cycles"] = json{{"h_plus", dec(h_plus)}};
        if (mpz_fdiv_ui(fd.field_radicand.get_mpz_t(), 4) != 1) {
            FundamentalUnit u = fundamental_unit(fd.field_radicand);
            ClassNumberResult a = h_real_analytic(fd, u);
            j["analytic"] = json{{"h", dec(a.h)}, {"h_mod_3", a.h_mod_3}};
            j["unit"] = unit_json(u);
            j["narrow_relation_holds"] =
                (u.norm == -1 ? h_plus == a.h : h_plus == 2 * a.h);
        } else {
            j["analytic"] = nullptr;
            j["note"] = "analytic h needs the unit of d ≡ 2,3 (mod 4); "
                        "d ≡ 1 (mod 4) units are out of scope";
        }
    }
    print_json(j);
    return 0;
}

int run_certify(const std::string& d_str, int theorem, bool with_audit, const std::string& height,
                const std::string& zbound) {
    ScanConfig cfg;
    Int d = parse_int(d_str);
    cfg.d_min = 1;
    cfg.d_max = 1;
    cfg.mode = (theorem == 2) ? TheoremMode::two : TheoremMode::one;
    cfg.audit = with_audit;
    cfg.height_bound = parse_int(height);
    cfg.z_bound = parse_int(zbound);
    print_json(build_record(d, cfg));
    return 0;
}

int run_aac(const std::string& d_str) {
    AacReport r = aac_residue(parse_int(d_str));
    json j;
    j["D"] = dec(r.D);
    j["q"] = dec(r.q);
    j["d_kernel"] = dec(r.d_kernel);
    j["h_minus_q"] = dec(r.h_minus_q);
    j["h_d"] = dec(r.h_d);
    j["T"] = dec(r.T);
    j["U"] = dec(r.U);
    j["residue_plus"] = r.residue_plus;
    j["residue_minus"] = r.residue_minus;
    j["plus_congruence_holds"] = r.plus_congruence_holds;
    print_json(j);
    return 0;
}

int run_curve_torsion(const std::string& m_str) {
    MordellCurve curve = canonicalize(parse_int(m_str));
    TorsionClass tc = torsion_class(curve);
    json j;
    j["m_raw"] = dec(curve.m_raw);
    j["m"] = dec(curve.m);
    j["t"] = dec(curve.t);
    j["torsion"] = to_string(tc.tag);
    json pts = json::array();
    for (const ProjPoint& p : tc.points) pts.push_back(point_json_xy(curve, p));
    j["points"] = pts;
    print_json(j);
    return 0;
}

int run_curve_search(const std::string& m_str, const std::string& height) {
    MordellCurve curve = canonicalize(parse_int(m_str));
    json j;
    j["m_raw"] = dec(curve.m_raw);
    j["m"] = dec(curve.m);
    j["t"] = dec(curve.t);
    j["height_bound"] = parse_int(height).get_str();
    json pts = json::array();
    for (const ProjPoint& p : search_points(curve, parse_int(height))) {
        pts.push_back(point_json_xy(curve, p));
    }
    j["points"] = pts;
    print_json(j);
    return 0;
}

int run_curve_double(const std::string& m_str, const std::string& a_str,
                     const std::string& b_str, const std::string& c_str) {
    MordellCurve curve = canonicalize(parse_int(m_str));
    ProjPoint p = make_point(curve, parse_int(a_str), parse_int(b_str), parse_int(c_str));
    json j;
    j["m"] = dec(curve.m);
    j["point"] = point_json_xy(curve, p);
    std::optional<ProjPoint> d = double_point(curve, p);
    j["double"] = d ? point_json_xy(curve, *d) : json(nullptr);  // null is the identity
    print_json(j);
    return 0;
}

int run_scan_cmd(const std::string& min_str, const std::string& max_str,
                 const std::string& theorem, bool with_audit, const std::string& height,
                 const std::string& zbound, const std::string& format,
                 const std::string& out_path, const std::string& cache_path, unsigned jobs) {
    ScanConfig cfg;
    cfg.d_min = parse_int(min_str);
    cfg.d_max = parse_int(max_str);
    if (theorem == "1") {
        cfg.mode = TheoremMode::one;
    } else if (theorem == "2") {
        cfg.mode = TheoremMode::two;
    } else if (theorem == "both") {
        cfg.mode = TheoremMode::both;
    } else {
        throw std::domain_error("--theorem must be 1, 2 or both");
    }
    cfg.audit = with_audit;
    cfg.height_bound = parse_int(height);
    cfg.z_bound = parse_int(zbound);
    if (format == "jsonl") {
        cfg.format = OutputFormat::jsonl;
    } else if (format == "csv") {
        cfg.format = OutputFormat::csv;
    } else {
        throw std::domain_error("--format must be jsonl or csv");
    }
    if (!cache_path.empty()) {
        cfg.cache_path = cache_path;
    } else if (const char* env = std::getenv("TWISTRANK_CACHE"); env && *env) {
        cfg.cache_path = std::string(env);
    }
    cfg.jobs = jobs;

    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot open output file: " + out_path);
        run_scan(cfg, out);
    } else {
        run_scan(cfg, std::cout);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    std::setvbuf(stdout, nullptr, _IOLBF, 0);

    CLI::App app{"exact rank-zero twist certificates, class numbers and audits for y^2 = x^3 + 2"};
    app.require_subcommand(1);

    // scan
    auto* scan = app.add_subcommand("scan", "scan a range of D and emit certificates");
    std::string min_str, max_str, theorem = "both", height = "100", zbound = "3";
    std::string format = "jsonl", out_path, cache_path;
    bool with_audit = false;
    unsigned jobs = 1;
    scan->add_option("--min", min_str, "smallest D")->required();
    scan->add_option("--max", max_str, "largest D")->required();
    scan->add_option("--theorem", theorem, "1, 2 or both (default both)");
    scan->add_flag("--audit", with_audit, "search the twist curves behind certified claims");
    scan->add_option("--height", height, "audit height bound max(|a|, c^2) (default 100)");
    scan->add_option("--zbound", zbound, "audit descent z bound (default 3)");
    scan->add_option("--format", format, "jsonl or csv")->required();
    scan->add_option("--out", out_path, "output path (default stdout)");
    scan->add_option("--cache", cache_path, "JSONL cache path (default $TWISTRANK_CACHE)");
    scan->add_option("--jobs", jobs, "parallel workers (default 1)");

    // certify
    auto* certify = app.add_subcommand("certify", "evaluate one D");
    std::string cert_d;
    int cert_theorem = 1;
    bool cert_audit = false;
    std::string cert_height = "100", cert_zbound = "3";
    certify->add_option("D", cert_d, "the twist parameter")->required();
    certify->add_option("--theorem", cert_theorem, "1 or 2 (default 1)")
        ->check(CLI::IsMember({1, 2}));
    certify->add_flag("--audit", cert_audit, "audit a certified claim");
    certify->add_option("--height", cert_height, "audit height bound (default 100)");
    certify->add_option("--zbound", cert_zbound, "audit descent z bound (default 3)");

    // classno
    auto* classno = app.add_subcommand("classno", "class number of a fundamental discriminant");
    std::string delta_str;
    classno->add_option("DELTA", delta_str, "fundamental discriminant (use -- before negatives)")
        ->required();

    // pell
    auto* pell = app.add_subcommand("pell", "continued fraction and fundamental unit");
    std::string pell_n;
    pell->add_option("N", pell_n, "nonsquare positive integer")->required();

    // curve
    auto* curve = app.add_subcommand("curve", "Mordell curve operations");
    curve->require_subcommand(1);
    auto* torsion = curve->add_subcommand("torsion", "torsion classification");
    std::string tor_m;
    torsion->add_option("M", tor_m, "curve constant (canonicalized first)")->required();
    auto* search = curve->add_subcommand("search", "rational points up to a naive height");
    std::string search_m, search_height = "100";
    search->add_option("M", search_m, "curve constant")->required();
    search->add_option("--height", search_height, "height bound max(|a|, c^2) (default 100)");
    auto* dbl = curve->add_subcommand("double", "duplicate a point (a, b, c)");
    std::string dbl_m, dbl_a, dbl_b, dbl_c;
    dbl->add_option("M", dbl_m, "curve constant")->required();
    dbl->add_option("A", dbl_a, "x numerator")->required();
    dbl->add_option("B", dbl_b, "y numerator")->required();
    dbl->add_option("C", dbl_c, "denominator root, x = A/C^2, y = B/C^3")->required();

    // aac
    auto* aac = app.add_subcommand("aac", "class number congruence report for D ≡ 2 (mod 3)");
    std::string aac_d;
    aac->add_option("D", aac_d, "odd squarefree D ≡ 2 (mod 3)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*scan) {
            return run_scan_cmd(min_str, max_str, theorem, with_audit, height, zbound, format,
                                out_path, cache_path, jobs);
        }
        if (*certify) {
            return run_certify(cert_d, cert_theorem, cert_audit, cert_height, cert_zbound);
        }
        if (*classno) return run_classno(delta_str);
        if (*pell) return run_pell(pell_n);
        if (*curve) {
            if (*torsion) return run_curve_torsion(tor_m);
            if (*search) return run_curve_search(search_m, search_height);
            if (*dbl) return run_curve_double(dbl_m, dbl_a, dbl_b, dbl_c);
        }
        if (*aac) return run_aac(aac_d);
    } catch (const ComputationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
