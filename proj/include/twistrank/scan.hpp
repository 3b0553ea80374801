#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "twistrank/criteria.hpp"

namespace twistrank {

enum class TheoremMode { one, two, both };
enum class OutputFormat { jsonl, csv };
const char* to_string(TheoremMode m);

struct ScanConfig {
    Int d_min, d_max;
    TheoremMode mode = TheoremMode::both;
    bool audit = false;
    Int height_bound = 100;
    Int z_bound = 3;
    OutputFormat format = OutputFormat::jsonl;
    std::optional<std::string> cache_path;
    unsigned jobs = 1;
    // Test mode: recompute a deterministic 5% sample of cache hits and fail
    // loudly on any mismatch.
    bool verify_cache_sample = false;
};

/// One scan record. Keys are emitted in a fixed order and big integers are
/// decimal strings, so dumps are byte-stable.
using Record = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Full per-D evaluation: certificates for the requested theorems, the
/// congruence report when D ≡ 2 (mod 3), and the audit block when enabled
/// and some certificate is certified. Pure in D and config.
Record build_record(const Int& D, const ScanConfig& config);

struct SummaryStats {
    long counted = 0;          // odd squarefree D scanned (3 excluded)
    long eligible = 0;
    long certified = 0;
    long h_im_not_div3 = 0;
    std::string observed_proportion;      // h_im_not_div3 / eligible, 4 decimals
    std::string cohen_lenstra_reference;  // "0.5601"
    long audit_findings = 0;
    // Cache accounting; returned to callers, never serialized.
    long computed = 0;
    long from_cache = 0;
};

/// prod_{k=1..40} (1 - 3^-k) rendered to 4 decimals.
std::string cohen_lenstra_reference();

/// Throws std::domain_error on an empty record set.
SummaryStats compute_stats(const std::vector<Record>& records, TheoremMode mode);

struct CacheData {
    std::map<Int, std::string> lines;  // D -> raw record line, last wins
};

/// Missing file yields an empty cache. Unparseable lines and schema
/// mismatches throw CacheError with the offending line number.
CacheData load_cache(const std::string& path);

/// A cached record substitutes for fresh evaluation only when it carries
/// exactly the requested certificates and a matching audit block.
bool record_matches_config(const Record& record, const ScanConfig& config);

std::string csv_header();
std::string csv_row(const Record& record);

/// Scans every odd squarefree D in [d_min, d_max] except 3, reusing cache
/// records where possible, and streams records (ascending D, regardless of
/// jobs) followed by a summary. Newly computed records are appended to the
/// cache file.
SummaryStats run_scan(const ScanConfig& config, std::ostream& out);

}  // namespace twistrank
