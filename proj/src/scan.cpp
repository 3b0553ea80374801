#include "twistrank/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <random>
#include <stdexcept>
#include <thread>

#include "twistrank/errors.hpp"

namespace twistrank {

namespace {

using json = nlohmann::ordered_json;

std::string dec(const Int& v) { return v.get_str(); }

json point_json(const ProjPoint& p) {
    return json{{"a", dec(p.a)}, {"b", dec(p.b)}, {"c", dec(p.c)}};
}

json triple_json(const SolutionTriple& t) {
    return json{{"x", dec(t.x)}, {"y", dec(t.y)}, {"z", dec(t.z)}};
}

json cert_json(const Certificate& c) {
    json j;
    j["theorem"] = to_string(c.theorem);
    j["eligible"] = c.is_eligible;
    j["reason"] = c.reason;
    const bool computed = c.is_eligible && c.error.empty();
    auto put = [&](const char* key, const Int& v) {
        if (computed) {
            j[key] = dec(v);
        } else {
            j[key] = nullptr;
        }
    };
    put("delta_im", c.delta_im);
    put("kernel_re", c.kernel_re);
    j["kernel_reduced"] = computed ? json(c.kernel_reduced) : json(nullptr);
    put("h_im", c.h_im);
    put("h_re", c.h_re);
    put("T", c.T);
    put("U", c.U);
    j["T_mod3"] = computed ? json(c.T_mod3) : json(nullptr);
    j["U_mod3"] = computed ? json(c.U_mod3) : json(nullptr);
    j["cond_I"] = computed ? json(c.cond_I) : json(nullptr);
    j["cond_II"] = computed ? json(c.cond_II) : json(nullptr);
    j["verdict"] = c.verdict ? json(to_string(*c.verdict)) : json("withheld");
    j["error"] = c.error.empty() ? json(nullptr) : json(c.error);
    return j;
}

json aac_json(const AacReport& r) {
    json j;
    j["q"] = dec(r.q);
    j["d_kernel"] = dec(r.d_kernel);
    j["h_minus_q"] = dec(r.h_minus_q);
    j["h_d"] = dec(r.h_d);
    j["T"] = dec(r.T);
    j["U"] = dec(r.U);
    j["residue_plus"] = r.residue_plus;
    j["residue_minus"] = r.residue_minus;
    j["plus_congruence_holds"] = r.plus_congruence_holds;
    return j;
}

json finding_json(const AuditFinding& f) {
    json j;
    j["curve_m"] = dec(f.curve_m);
    j["kind"] = to_string(f.kind);
    if (f.kind == FindingKind::descent_solution) {
        j["k"] = dec(f.descent_k);
        j["witness"] = triple_json(*f.triple);
    } else {
        j["witness"] = point_json(*f.point);
    }
    return j;
}

std::vector<TheoremId> requested_theorems(TheoremMode mode) {
    switch (mode) {
        case TheoremMode::one: return {TheoremId::one};
        case TheoremMode::two: return {TheoremId::two};
        case TheoremMode::both: return {TheoremId::one, TheoremId::two};
    }
    return {};
}

bool cert_certified(const json& cert) {
    return cert.contains("verdict") && cert["verdict"] == "certified_rank_zero_claim";
}

// Render num/den to 4 decimal places, rounding half up; "n/a" when den = 0.
std::string ratio_4dp(long num, long den) {
    if (den == 0) return "n/a";
    long long scaled = (static_cast<long long>(num) * 20000 + den) / (2LL * den);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%lld.%04lld", scaled / 10000, scaled % 10000);
    return buf;
}

}  // namespace

const char* to_string(TheoremMode m) {
    switch (m) {
        case TheoremMode::one: return "one";
        case TheoremMode::two: return "two";
        case TheoremMode::both: return "both";
    }
    return "?";
}

std::string cohen_lenstra_reference() {
    // prod_{k>=1} (1 - 3^-k); the partial product to k = 40 is stable far
    // beyond four decimals.
    double prod = 1.0;
    double p3 = 1.0;
    for (int k = 1; k <= 40; ++k) {
        p3 /= 3.0;
        prod *= 1.0 - p3;
    }
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%.4f", prod);
    return buf;
}

Record build_record(const Int& D, const ScanConfig& config) {
    json rec;
    rec["schema_version"] = kSchemaVersion;
    rec["D"] = dec(D);

    const bool base_ok = eligible(D, TheoremId::one).ok;
    const bool wants_aac = base_ok && mod3(D) == 2;
    const bool needs_invariants =
        base_ok && (config.mode != TheoremMode::two || wants_aac);

    std::optional<Invariants> inv;
    std::string inv_error;
    if (needs_invariants) {
        try {
            inv = compute_invariants(D);
        } catch (const ComputationError& ex) {
            inv_error = ex.what();
        }
    }

    std::vector<Certificate> certs;
    json jcerts;
    for (TheoremId t : requested_theorems(config.mode)) {
        Certificate c;
        if (!eligible(D, t).ok) {
            c = evaluate(D, t);  // short-circuits to not_applicable
        } else if (inv) {
            c = evaluate_with(D, t, *inv);
        } else if (!inv_error.empty()) {
            c = error_certificate(D, t, inv_error);
        } else {
            c = evaluate(D, t);
        }
        jcerts[to_string(t)] = cert_json(c);
        certs.push_back(std::move(c));
    }
    rec["certificates"] = jcerts;

    if (wants_aac) {
        if (inv) {
            rec["aac"] = aac_json(aac_from(D, *inv));
        } else {
            rec["aac"] = json{{"error", inv_error}};
        }
    } else {
        rec["aac"] = nullptr;
    }

    json jaudit = nullptr;
    if (config.audit) {
        for (const Certificate& c : certs) {
            if (!c.verdict || *c.verdict != Verdict::certified_rank_zero_claim) continue;
            jaudit = json{{"height_bound", dec(config.height_bound)},
                          {"z_bound", dec(config.z_bound)}};
            json jfindings = json::array();
            try {
                for (const AuditFinding& f : audit(c, config.height_bound, config.z_bound)) {
                    jfindings.push_back(finding_json(f));
                }
                jaudit["findings"] = jfindings;
            } catch (const ComputationError& ex) {
                jaudit["error"] = ex.what();
            }
            break;
        }
    }
    rec["audit"] = jaudit;
    return rec;
}

CacheData load_cache(const std::string& path) {
    std::ifstream in(path);
    CacheData cd;
    if (!in) return cd;  // no cache yet
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            throw CacheError("cache " + path + ": corrupt record at line " +
                             std::to_string(lineno));
        }
        if (!j.contains("schema_version") || !j["schema_version"].is_number_integer() ||
            j["schema_version"].get<int>() != kSchemaVersion) {
            throw CacheError("cache " + path + ": schema_version mismatch at line " +
                             std::to_string(lineno) + " (expected " +
                             std::to_string(kSchemaVersion) + ")");
        }
        if (!j.contains("D") || !j["D"].is_string()) {
            throw CacheError("cache " + path + ": record without D at line " +
                             std::to_string(lineno));
        }
        Int d;
        try {
            d = Int(j["D"].get<std::string>());
        } catch (const std::invalid_argument&) {
            throw CacheError("cache " + path + ": malformed D at line " + std::to_string(lineno));
        }
        cd.lines[d] = line;
    }
    return cd;
}

bool record_matches_config(const Record& record, const ScanConfig& config) {
    if (!record.is_object() || !record.contains("certificates")) return false;
    const json& certs = record["certificates"];
    if (!certs.is_object()) return false;
    std::vector<TheoremId> want = requested_theorems(config.mode);
    if (certs.size() != want.size()) return false;
    bool any_certified = false;
    for (TheoremId t : want) {
        const char* key = to_string(t);
        if (!certs.contains(key)) return false;
        any_certified = any_certified || cert_certified(certs[key]);
    }
    if (!record.contains("audit")) return false;
    const json& jaudit = record["audit"];
    if (!config.audit) return jaudit.is_null();
    if (jaudit.is_null()) return !any_certified;  // nothing to audit without a claim
    return jaudit.is_object() && jaudit.contains("height_bound") &&
           jaudit["height_bound"] == dec(config.height_bound) &&
           jaudit.contains("z_bound") && jaudit["z_bound"] == dec(config.z_bound);
}

SummaryStats compute_stats(const std::vector<Record>& records, TheoremMode mode) {
    if (records.empty()) throw std::domain_error("stats: empty record set");
    SummaryStats st;
    st.cohen_lenstra_reference = cohen_lenstra_reference();
    const char* lead_key = (mode == TheoremMode::two) ? "two" : "one";
    for (const Record& rec : records) {
        ++st.counted;
        const json& certs = rec["certificates"];
        const json& lead = certs[lead_key];
        bool is_eligible = lead.contains("eligible") && lead["eligible"].is_boolean() &&
                           lead["eligible"].get<bool>();
        if (is_eligible) {
            ++st.eligible;
            if (lead.contains("cond_I") && lead["cond_I"].is_boolean() &&
                lead["cond_I"].get<bool>()) {
                ++st.h_im_not_div3;
            }
        }
        for (const auto& [key, cert] : certs.items()) {
            if (cert_certified(cert)) {
                ++st.certified;
                break;
            }
        }
        const json& jaudit = rec["audit"];
        if (jaudit.is_object() && jaudit.contains("findings")) {
            st.audit_findings += static_cast<long>(jaudit["findings"].size());
        }
    }
    st.observed_proportion = ratio_4dp(st.h_im_not_div3, st.eligible);
    return st;
}

namespace {

json summary_json(const SummaryStats& st) {
    json s;
    s["counted"] = st.counted;
    s["eligible"] = st.eligible;
    s["certified"] = st.certified;
    s["h_im_not_div3"] = st.h_im_not_div3;
    s["observed_proportion"] = st.observed_proportion;
    s["cohen_lenstra_reference"] = st.cohen_lenstra_reference;
    s["audit_findings"] = st.audit_findings;
    return json{{"summary", s}};
}

std::string csv_cell(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) return "";
    const json& v = j[key];
    if (v.is_null()) return "";
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
}

}  // namespace

std::string csv_header() {
    return "D,theorem_one_eligible,theorem_one_verdict,theorem_two_eligible,"
           "theorem_two_verdict,h_im,h_re,kernel_re,kernel_reduced,T_mod3,U_mod3,"
           "cond_I,cond_II,aac_residue_plus,aac_residue_minus,audit_finding_count,"
           "audit_witnesses";
}

std::string csv_row(const Record& rec) {
    const json& certs = rec["certificates"];
    static const json empty = json::object();
    const json& one = certs.contains("one") ? certs["one"] : empty;
    const json& two = certs.contains("two") ? certs["two"] : empty;
    // Numeric invariants are shared; prefer the certificate that computed them.
    const json& comp = (one.contains("h_im") && !one["h_im"].is_null()) ? one : two;
    const json& jaac = rec["aac"];
    const json& jaudit = rec["audit"];

    std::string row = rec["D"].get<std::string>();
    row += ',' + csv_cell(one, "eligible");
    row += ',' + csv_cell(one, "verdict");
    row += ',' + csv_cell(two, "eligible");
    row += ',' + csv_cell(two, "verdict");
    row += ',' + csv_cell(comp, "h_im");
    row += ',' + csv_cell(comp, "h_re");
    row += ',' + csv_cell(comp, "kernel_re");
    row += ',' + csv_cell(comp, "kernel_reduced");
    row += ',' + csv_cell(comp, "T_mod3");
    row += ',' + csv_cell(comp, "U_mod3");
    row += ',' + csv_cell(comp, "cond_I");
    row += ',' + csv_cell(comp, "cond_II");
    row += ',' + csv_cell(jaac, "residue_plus");
    row += ',' + csv_cell(jaac, "residue_minus");
    if (jaudit.is_object() && jaudit.contains("findings")) {
        const json& findings = jaudit["findings"];
        row += ',' + std::to_string(findings.size());
        row += ',';
        bool first = true;
        for (const json& f : findings) {
            if (!first) row += ';';
            first = false;
            const json& w = f["witness"];
            if (w.contains("x")) {
                row += w["x"].get<std::string>() + '/' + w["y"].get<std::string>() + '/' +
                       w["z"].get<std::string>();
            } else {
                row += w["a"].get<std::string>() + '/' + w["b"].get<std::string>() + '/' +
                       w["c"].get<std::string>();
            }
        }
    } else {
        row += ",,";
    }
    return row;
}

SummaryStats run_scan(const ScanConfig& config, std::ostream& out) {
    if (config.d_min < 1 || config.d_max < config.d_min) {
        throw std::domain_error("scan: need 1 <= d_min <= d_max");
    }
    if (config.height_bound < 1 || config.z_bound < 1) {
        throw std::domain_error("scan: bounds must be >= 1");
    }
    if (config.jobs < 1) throw std::domain_error("scan: jobs must be >= 1");

    std::vector<Int> ds;
    for (Int D = config.d_min; D <= config.d_max; ++D) {
        if (mpz_even_p(D.get_mpz_t()) || D == 3) continue;
        if (!is_squarefree(D)) continue;
        ds.push_back(D);
    }
    if (ds.empty()) throw std::domain_error("scan: no odd squarefree D in range");

    CacheData cache;
    if (config.cache_path) cache = load_cache(*config.cache_path);

    std::vector<Record> records(ds.size());
    std::vector<char> from_cache(ds.size(), 0);
    std::vector<std::size_t> work;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        auto it = cache.lines.find(ds[i]);
        if (it != cache.lines.end()) {
            Record rec = Record::parse(it->second, nullptr, false);
            if (!rec.is_discarded() && record_matches_config(rec, config)) {
                records[i] = std::move(rec);
                from_cache[i] = 1;
                continue;
            }
        }
        work.push_back(i);
    }

    // Evaluate the missing D. Workers claim indices; the emission order
    // below is by position, so results are identical for any job count.
    auto compute_one = [&](std::size_t i) { records[i] = build_record(ds[i], config); };
    const unsigned jobs =
        static_cast<unsigned>(std::min<std::size_t>(config.jobs, work.size()));
    if (jobs <= 1) {
        for (std::size_t i : work) compute_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr first_error;
        std::mutex error_mutex;
        std::vector<std::thread> pool;
        pool.reserve(jobs);
        for (unsigned t = 0; t < jobs; ++t) {
            pool.emplace_back([&] {
                while (true) {
                    std::size_t k = next.fetch_add(1);
                    if (k >= work.size()) break;
                    try {
                        compute_one(work[k]);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(error_mutex);
                        if (!first_error) first_error = std::current_exception();
                        break;
                    }
                }
            });
        }
        for (std::thread& th : pool) th.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    // Test mode: recompute a deterministic 5% sample of the cache hits.
    if (config.verify_cache_sample) {
        std::vector<std::size_t> hits;
        for (std::size_t i = 0; i < ds.size(); ++i) {
            if (from_cache[i]) hits.push_back(i);
        }
        if (!hits.empty()) {
            std::mt19937 rng(20240601u);
            std::shuffle(hits.begin(), hits.end(), rng);
            std::size_t sample = std::max<std::size_t>(1, hits.size() / 20);
            for (std::size_t k = 0; k < sample; ++k) {
                std::size_t i = hits[k];
                if (build_record(ds[i], config).dump() != records[i].dump()) {
                    throw CacheError("cache record for D = " + ds[i].get_str() +
                                     " does not match fresh recomputation");
                }
            }
        }
    }

    std::ofstream cache_append;
    if (config.cache_path) {
        cache_append.open(*config.cache_path, std::ios::app);
        if (!cache_append) {
            throw std::runtime_error("scan: cannot open cache for writing: " +
                                     *config.cache_path);
        }
    }

    if (config.format == OutputFormat::csv) {
        out << csv_header() << '\n';
        out.flush();
    }
    for (std::size_t i = 0; i < ds.size(); ++i) {
        std::string line = records[i].dump();
        if (config.format == OutputFormat::jsonl) {
            out << line << '\n';
        } else {
            out << csv_row(records[i]) << '\n';
        }
        out.flush();
        if (!from_cache[i] && cache_append.is_open()) cache_append << line << '\n';
    }

    SummaryStats st = compute_stats(records, config.mode);
    for (char hit : from_cache) {
        if (hit) {
            ++st.from_cache;
        } else {
            ++st.computed;
        }
    }
    if (config.format == OutputFormat::jsonl) {
        out << summary_json(st).dump() << '\n';
    } else {
        out << "# counted=" << st.counted << " eligible=" << st.eligible << " certified="
            << st.certified << " h_im_not_div3=" << st.h_im_not_div3 << " observed_proportion="
            << st.observed_proportion << " cohen_lenstra_reference=" << st.cohen_lenstra_reference
            << " audit_findings=" << st.audit_findings << '\n';
    }
    out.flush();
    return st;
}

}  // namespace twistrank
