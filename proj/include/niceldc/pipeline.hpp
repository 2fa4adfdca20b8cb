#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "niceldc/bigint.hpp"
#include "niceldc/ldc.hpp"
#include "niceldc/number_theory.hpp"

namespace niceldc {

enum class Method { class_scan, gcd, both };

std::string to_string(Method m);
Method parse_method(const std::string& s);

struct RunConfig {
    std::uint64_t lo = 3;
    std::uint64_t hi = 1000;
    Method method = Method::class_scan;
    unsigned threads = 0; // 0: NICELDC_THREADS, else hardware concurrency
    std::uint64_t seed = 0;
    std::string checkpoint_path;
    bool timing = false;    // fill elapsed ms; off keeps exports byte-stable
    bool witnesses = true;  // canonical witness for every dependency
    std::uint64_t chunk_width = 1u << 16;
    /// Return after committing this many chunks (0: run to the end).
    std::uint64_t stop_after_chunks = 0;

    /// FNV-1a over the fields that determine the output, as 16 hex digits.
    std::string fingerprint() const;
};

struct SearchRecord {
    std::uint64_t p = 0;
    std::uint64_t t = 0;
    bool nec3 = false;
    bool odd_t = false;
    bool weil = false;
    bool dep = false;
    std::string method;
    std::optional<std::vector<std::uint64_t>> witness;
    std::uint64_t ms = 0;

    friend bool operator==(const SearchRecord&, const SearchRecord&) = default;
};

struct SearchSummary {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
    std::string method;
    std::uint64_t seed = 0;
    std::uint64_t odd_primes = 0;
    std::uint64_t passed_nec3 = 0;        // before the parity filter
    std::uint64_t passed_odd_t = 0;       // odd t (or p = 3), any nec3 outcome
    std::uint64_t passed_nec3_odd_t = 0;  // both filters; these reach the test
    std::uint64_t dependencies = 0;
    std::uint64_t non_weil = 0;           // dependencies with sufficient_cond_3 false
    std::uint64_t weil_sufficient = 0;

    std::vector<std::pair<std::string, std::uint64_t>> counters() const;
    friend bool operator==(const SearchSummary&, const SearchSummary&) = default;
};

struct SearchResult {
    std::vector<SearchRecord> records; // ordered by p
    SearchSummary summary;
    bool completed = false;
};

/// Filters and tests every odd prime in [lo, hi]; resumable through
/// cfg.checkpoint_path (two lines: fingerprint, last committed prime) and its
/// `.records.jsonl` sidecar. Output does not depend on the thread count.
/// In both mode a disagreement between the two tests throws std::logic_error.
SearchResult run_search(const RunConfig& cfg);

/// The per-prime step of run_search; nullopt when a filter rules p out.
std::optional<SearchRecord> search_prime(std::uint64_t p, const RunConfig& cfg, SearchSummary* counters = nullptr);

void write_jsonl(std::ostream& os, const std::vector<SearchRecord>& records, const SearchSummary& summary);
void write_csv(std::ostream& os, const std::vector<SearchRecord>& records, const SearchSummary& summary);
std::string record_to_json(const SearchRecord& r);
SearchRecord record_from_json(const std::string& line);

struct LoadedRun {
    std::vector<SearchRecord> records;
    SearchSummary summary;
};
LoadedRun read_jsonl(std::istream& is);
LoadedRun read_csv(std::istream& is);

/// Format chosen by extension (.csv, otherwise JSONL). Writes via a temp file.
void export_run(const std::string& path, const std::vector<SearchRecord>& records, const SearchSummary& summary);
LoadedRun load_run(const std::string& path);

/// gamma = a / b, parsed from "a/b" or a decimal such as "0.75".
struct Fraction {
    std::uint64_t num = 3;
    std::uint64_t den = 4;
    static Fraction parse(const std::string& s);
    std::string str() const;
};

struct BoundVerdict {
    std::string name;
    double threshold = 0; // for display; the verdict is exact
    bool holds = false;
};

struct BoundReport {
    unsigned t = 0;
    u128 mersenne = 0;
    Factorization factors;
    std::optional<u128> largest; // P(2^t - 1); empty when factoring ran out
    bool complete = false;
    std::vector<BoundVerdict> verdicts;
};

/// For each t: P(2^t - 1) and the exact verdicts
///   P > 2^(3t/4), P > 2^(gamma t), P >= (t/2)^(1 + 1/(k-2)), P >= (3/4) t^2.
std::vector<BoundReport> eval_bounds(unsigned t_lo, unsigned t_hi, unsigned k, const Fraction& gamma,
                                     std::uint64_t rho_budget = 2'000'000);

struct ConverseReport {
    std::uint64_t checked = 0;
    std::vector<std::string> violations;
    bool ok() const noexcept { return violations.empty(); }
};

/// Every dependency must satisfy p >= (t/2)^(1 + 1/(k-2)) and p >= (3/4) t^2.
ConverseReport converse_check(const std::vector<SearchRecord>& records, unsigned k = 3);

struct LdcDemoReport {
    std::uint64_t p = 0;
    std::uint64_t t = 0;
    std::size_t m = 0;
    std::size_t n = 0;
    std::uint64_t length = 0;
    std::string witness;
    ResidueSet s1;
    ResidueSet s0;
    bool roundtrip_ok = false; // every bit decodes from an uncorrupted codeword
    SmoothnessStats smoothness;
    std::vector<SimulationReport> rows;
};

/// Witness -> (S0, S1) -> trivial family -> code -> simulation. Throws
/// NotFoundError with the filter numbers when p has no 3-dependency.
LdcDemoReport ldc_demo(std::uint64_t p, std::size_t m, const std::vector<double>& deltas, std::uint64_t trials,
                       std::uint64_t seed);

} // namespace niceldc
