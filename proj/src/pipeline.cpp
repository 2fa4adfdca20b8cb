#include "niceldc/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "niceldc/errors.hpp"
#include "niceldc/rng.hpp"
#include "niceldc/rootsum.hpp"

namespace niceldc {

namespace {

using ojson = nlohmann::ordered_json;

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

unsigned resolve_threads(unsigned requested) {
    if (const char* env = std::getenv("NICELDC_THREADS"); env && *env) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    if (requested > 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

void add_counters(SearchSummary& into, const SearchSummary& from) {
    into.odd_primes += from.odd_primes;
    into.passed_nec3 += from.passed_nec3;
    into.passed_odd_t += from.passed_odd_t;
    into.passed_nec3_odd_t += from.passed_nec3_odd_t;
    into.dependencies += from.dependencies;
    into.non_weil += from.non_weil;
    into.weil_sufficient += from.weil_sufficient;
}

// Filter-stage counters for one prime; returns whether p reaches the test.
bool count_filters(std::uint64_t p, std::uint64_t t, SearchSummary& c) {
    const bool nec = necessary_cond_3(p, t);
    const bool odd = odd_t_filter(p, t);
    ++c.odd_primes;
    c.passed_nec3 += nec;
    c.passed_odd_t += odd;
    c.passed_nec3_odd_t += nec && odd;
    if (nec && odd && sufficient_cond_3(p, t)) ++c.weil_sufficient;
    return nec && odd;
}

struct Checkpoint {
    std::string fingerprint;
    std::uint64_t last = 0;
};

std::optional<Checkpoint> read_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    Checkpoint c;
    std::string last;
    if (!std::getline(in, c.fingerprint) || !std::getline(in, last)) {
        throw UsageError("checkpoint " + path + " is malformed");
    }
    c.last = std::stoull(last);
    return c;
}

void write_atomically(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("cannot write " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

std::string sidecar_path(const std::string& checkpoint) { return checkpoint + ".records.jsonl"; }

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(std::move(cur));
    return out;
}

std::string join_exponents(const std::vector<std::uint64_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

bool parse_bool(const std::string& s) {
    if (s == "true") return true;
    if (s == "false") return false;
    throw UsageError("expected true/false, got '" + s + "'");
}

void set_summary_field(SearchSummary& s, const std::string& key, const std::string& value) {
    if (key == "method") {
        s.method = value;
        return;
    }
    const std::uint64_t v = std::stoull(value);
    std::uint64_t* slots[] = {&s.lo, &s.hi, &s.seed, &s.odd_primes, &s.passed_nec3, &s.passed_odd_t,
                              &s.passed_nec3_odd_t, &s.dependencies, &s.non_weil, &s.weil_sufficient};
    const char* names[] = {"lo", "hi", "seed", "odd_primes", "passed_nec3", "passed_odd_t",
                           "passed_nec3_odd_t", "dependencies", "non_weil", "weil_sufficient"};
    for (std::size_t i = 0; i < std::size(names); ++i) {
        if (key == names[i]) {
            *slots[i] = v;
            return;
        }
    }
    throw UsageError("unknown summary field '" + key + "'");
}

struct Chunk {
    std::uint64_t lo;
    std::uint64_t hi;
};

struct ChunkOut {
    std::vector<SearchRecord> records;
    SearchSummary counters;
    std::uint64_t last_prime = 0;
};

ChunkOut process_chunk(const Chunk& ch, const RunConfig& cfg) {
    ChunkOut out;
    for_each_prime(ch.lo, ch.hi, [&](std::uint64_t p) {
        if (p < 3) return true;
        out.last_prime = p;
        if (auto rec = search_prime(p, cfg, &out.counters)) out.records.push_back(std::move(*rec));
        return true;
    });
    return out;
}

} // namespace

std::string to_string(Method m) {
    switch (m) {
    case Method::class_scan: return "class";
    case Method::gcd: return "gcd";
    case Method::both: return "both";
    }
    return "class";
}

Method parse_method(const std::string& s) {
    if (s == "class") return Method::class_scan;
    if (s == "gcd") return Method::gcd;
    if (s == "both") return Method::both;
    throw UsageError("unknown method '" + s + "' (expected class, gcd or both)");
}

std::string RunConfig::fingerprint() const {
    std::ostringstream os;
    os << "lo=" << lo << ";hi=" << hi << ";method=" << to_string(method) << ";seed=" << seed
       << ";timing=" << timing << ";witnesses=" << witnesses;
    return hex64(fnv1a(os.str()));
}

std::vector<std::pair<std::string, std::uint64_t>> SearchSummary::counters() const {
    return {{"odd_primes", odd_primes},
            {"passed_nec3", passed_nec3},
            {"passed_odd_t", passed_odd_t},
            {"passed_nec3_odd_t", passed_nec3_odd_t},
            {"dependencies", dependencies},
            {"non_weil", non_weil},
            {"weil_sufficient", weil_sufficient}};
}

std::optional<SearchRecord> search_prime(std::uint64_t p, const RunConfig& cfg, SearchSummary* counters) {
    SearchSummary local;
    SearchSummary& c = counters ? *counters : local;
    const std::uint64_t t = ord2(p);
    if (!count_filters(p, t, c)) return std::nullopt;
    const auto started = std::chrono::steady_clock::now();
    SearchRecord r;
    r.p = p;
    r.t = t;
    r.nec3 = true;
    r.odd_t = true;
    r.weil = sufficient_cond_3(p, t);
    const std::uint64_t seed = derive_seed(cfg.seed, p);
    switch (cfg.method) {
    case Method::class_scan:
        r.dep = class_test_3(p, seed).exponent.has_value();
        r.method = "class";
        break;
    case Method::gcd:
        r.dep = gcd_test_3(p);
        r.method = "gcd";
        break;
    case Method::both: {
        r.dep = class_test_3(p, seed).exponent.has_value();
        if (gcd_test_3(p) != r.dep) {
            throw std::logic_error("gcd and class tests disagree at p = " + std::to_string(p));
        }
        r.method = "class";
        break;
    }
    }
    if (r.dep) {
        ++c.dependencies;
        if (!r.weil) ++c.non_weil;
        if (cfg.witnesses) r.witness = extract_witness_3(p, seed).exponents;
    }
    if (cfg.timing) {
        r.ms = static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                              std::chrono::steady_clock::now() - started)
                                              .count());
    }
    return r;
}

SearchResult run_search(const RunConfig& cfg) {
    if (cfg.hi < cfg.lo) throw UsageError("run_search: hi must be >= lo");
    if (cfg.chunk_width == 0) throw UsageError("run_search: chunk width must be positive");
    SearchResult res;
    res.summary.lo = cfg.lo;
    res.summary.hi = cfg.hi;
    res.summary.method = to_string(cfg.method);
    res.summary.seed = cfg.seed;

    const std::uint64_t start = std::max<std::uint64_t>(cfg.lo, 3);
    std::uint64_t next = start;
    std::uint64_t last_committed = start - 1;
    const bool checkpointing = !cfg.checkpoint_path.empty();
    const std::string fp = cfg.fingerprint();

    if (checkpointing) {
        const std::string side = sidecar_path(cfg.checkpoint_path);
        if (auto ck = read_checkpoint(cfg.checkpoint_path)) {
            if (ck->fingerprint != fp) {
                throw UsageError("checkpoint " + cfg.checkpoint_path + " belongs to a different configuration");
            }
            last_committed = ck->last;
            std::ifstream in(side);
            std::string line;
            std::string kept;
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                auto rec = record_from_json(line);
                if (rec.p > last_committed) continue; // written after the last checkpoint
                kept += line + '\n';
                res.records.push_back(std::move(rec));
            }
            write_atomically(side, kept);
            // Filter counters are cheap to rebuild; test outcomes come from the records.
            if (last_committed >= start) {
                for_each_prime(start, std::min(last_committed, cfg.hi), [&](std::uint64_t p) {
                    count_filters(p, ord2(p), res.summary);
                    return true;
                });
            }
            for (const auto& r : res.records) {
                res.summary.dependencies += r.dep;
                res.summary.non_weil += r.dep && !r.weil;
            }
            next = last_committed + 1;
        } else {
            write_atomically(side, "");
        }
    }

    std::vector<Chunk> chunks;
    for (std::uint64_t a = next; a <= cfg.hi;) {
        const std::uint64_t b = cfg.hi - a < cfg.chunk_width - 1 ? cfg.hi : a + cfg.chunk_width - 1;
        chunks.push_back({a, b});
        if (b == cfg.hi) break;
        a = b + 1;
    }

    std::mutex mu;
    std::condition_variable cv;
    std::vector<std::optional<ChunkOut>> outs(chunks.size());
    std::atomic<std::size_t> next_chunk{0};
    std::atomic<bool> stop{false};
    std::exception_ptr failure;

    auto worker = [&] {
        for (;;) {
            if (stop.load()) return;
            const std::size_t idx = next_chunk.fetch_add(1);
            if (idx >= chunks.size()) return;
            try {
                auto out = process_chunk(chunks[idx], cfg);
                std::lock_guard lock(mu);
                outs[idx] = std::move(out);
            } catch (...) {
                std::lock_guard lock(mu);
                if (!failure) failure = std::current_exception();
                stop = true;
            }
            cv.notify_all();
        }
    };

    const unsigned nthreads = std::min<std::size_t>(resolve_threads(cfg.threads), std::max<std::size_t>(chunks.size(), 1));
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < nthreads; ++i) pool.emplace_back(worker);

    std::ofstream sidecar;
    if (checkpointing) sidecar.open(sidecar_path(cfg.checkpoint_path), std::ios::app | std::ios::binary);

    std::exception_ptr commit_failure;
    std::uint64_t committed = 0;
    bool stopped_early = false;
    try {
        for (std::size_t idx = 0; idx < chunks.size(); ++idx) {
            ChunkOut out;
            {
                std::unique_lock lock(mu);
                cv.wait(lock, [&] { return outs[idx].has_value() || failure; });
                if (!outs[idx]) break;
                out = std::move(*outs[idx]);
                outs[idx].reset();
            }
            add_counters(res.summary, out.counters);
            if (checkpointing) {
                for (const auto& r : out.records) sidecar << record_to_json(r) << '\n';
                sidecar.flush();
                if (!sidecar) throw std::runtime_error("cannot append to " + sidecar_path(cfg.checkpoint_path));
                if (out.last_prime) last_committed = out.last_prime;
                write_atomically(cfg.checkpoint_path, fp + '\n' + std::to_string(last_committed) + '\n');
            }
            for (auto& r : out.records) res.records.push_back(std::move(r));
            ++committed;
            if (cfg.stop_after_chunks && committed >= cfg.stop_after_chunks && idx + 1 < chunks.size()) {
                stopped_early = true;
                break;
            }
        }
    } catch (...) {
        commit_failure = std::current_exception();
    }
    stop = true;
    cv.notify_all();
    for (auto& th : pool) th.join();
    if (commit_failure) std::rethrow_exception(commit_failure);
    if (failure) std::rethrow_exception(failure);
    res.completed = !stopped_early;
    return res;
}

std::string record_to_json(const SearchRecord& r) {
    ojson j;
    j["p"] = r.p;
    j["t"] = r.t;
    j["nec3"] = r.nec3;
    j["odd_t"] = r.odd_t;
    j["weil"] = r.weil;
    j["dep"] = r.dep;
    j["method"] = r.method;
    j["witness"] = r.witness ? ojson(*r.witness) : ojson(nullptr);
    j["ms"] = r.ms;
    return j.dump();
}

SearchRecord record_from_json(const std::string& line) {
    const auto j = nlohmann::json::parse(line);
    SearchRecord r;
    r.p = j.at("p").get<std::uint64_t>();
    r.t = j.at("t").get<std::uint64_t>();
    r.nec3 = j.at("nec3").get<bool>();
    r.odd_t = j.at("odd_t").get<bool>();
    r.weil = j.at("weil").get<bool>();
    r.dep = j.at("dep").get<bool>();
    r.method = j.at("method").get<std::string>();
    if (!j.at("witness").is_null()) r.witness = j.at("witness").get<std::vector<std::uint64_t>>();
    r.ms = j.at("ms").get<std::uint64_t>();
    return r;
}

void write_jsonl(std::ostream& os, const std::vector<SearchRecord>& records, const SearchSummary& summary) {
    for (const auto& r : records) os << record_to_json(r) << '\n';
    ojson s;
    s["lo"] = summary.lo;
    s["hi"] = summary.hi;
    s["method"] = summary.method;
    s["seed"] = summary.seed;
    for (const auto& [k, v] : summary.counters()) s[k] = v;
    ojson footer;
    footer["summary"] = s;
    os << footer.dump() << '\n';
}

void write_csv(std::ostream& os, const std::vector<SearchRecord>& records, const SearchSummary& summary) {
    os << "p,t,nec3,odd_t,weil,dep,method,witness,ms\n";
    auto b = [](bool v) { return v ? "true" : "false"; };
    for (const auto& r : records) {
        os << r.p << ',' << r.t << ',' << b(r.nec3) << ',' << b(r.odd_t) << ',' << b(r.weil) << ',' << b(r.dep) << ','
           << csv_field(r.method) << ',' << (r.witness ? csv_field(join_exponents(*r.witness)) : "") << ',' << r.ms
           << '\n';
    }
    os << "# lo=" << summary.lo << "\n# hi=" << summary.hi << "\n# method=" << summary.method
       << "\n# seed=" << summary.seed << '\n';
    for (const auto& [k, v] : summary.counters()) os << "# " << k << '=' << v << '\n';
}

LoadedRun read_jsonl(std::istream& is) {
    LoadedRun run;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto j = nlohmann::json::parse(line);
        if (j.contains("summary")) {
            for (const auto& [k, v] : j.at("summary").items()) {
                set_summary_field(run.summary, k, v.is_string() ? v.get<std::string>() : std::to_string(v.get<std::uint64_t>()));
            }
            continue;
        }
        run.records.push_back(record_from_json(line));
    }
    return run;
}

LoadedRun read_csv(std::istream& is) {
    LoadedRun run;
    std::string line;
    bool header = true;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.rfind("# ", 0) == 0) {
            const auto eq = line.find('=');
            if (eq == std::string::npos) throw UsageError("csv: bad footer line");
            set_summary_field(run.summary, line.substr(2, eq - 2), line.substr(eq + 1));
            continue;
        }
        if (header) {
            header = false;
            continue;
        }
        const auto f = csv_split(line);
        if (f.size() != 9) throw UsageError("csv: expected 9 fields");
        SearchRecord r;
        r.p = std::stoull(f[0]);
        r.t = std::stoull(f[1]);
        r.nec3 = parse_bool(f[2]);
        r.odd_t = parse_bool(f[3]);
        r.weil = parse_bool(f[4]);
        r.dep = parse_bool(f[5]);
        r.method = f[6];
        if (!f[7].empty()) {
            std::vector<std::uint64_t> w;
            std::stringstream ss(f[7]);
            std::string item;
            while (std::getline(ss, item, ',')) w.push_back(std::stoull(item));
            r.witness = std::move(w);
        }
        r.ms = std::stoull(f[8]);
        run.records.push_back(std::move(r));
    }
    return run;
}

namespace {

bool is_csv_path(const std::string& path) {
    return std::filesystem::path(path).extension() == ".csv";
}

} // namespace

void export_run(const std::string& path, const std::vector<SearchRecord>& records, const SearchSummary& summary) {
    std::ostringstream os;
    if (is_csv_path(path)) {
        write_csv(os, records, summary);
    } else {
        write_jsonl(os, records, summary);
    }
    write_atomically(path, os.str());
}

LoadedRun load_run(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw NotFoundError("cannot open " + path);
    return is_csv_path(path) ? read_csv(in) : read_jsonl(in);
}

Fraction Fraction::parse(const std::string& s) {
    Fraction f;
    try {
        if (const auto slash = s.find('/'); slash != std::string::npos) {
            f.num = std::stoull(s.substr(0, slash));
            f.den = std::stoull(s.substr(slash + 1));
        } else {
            const auto dot = s.find('.');
            const std::string whole = s.substr(0, dot);
            const std::string frac = dot == std::string::npos ? "" : s.substr(dot + 1);
            if (frac.size() > 6) throw UsageError("gamma: at most 6 decimal places");
            f.den = 1;
            for (std::size_t i = 0; i < frac.size(); ++i) f.den *= 10;
            f.num = (whole.empty() ? 0 : std::stoull(whole)) * f.den + (frac.empty() ? 0 : std::stoull(frac));
        }
    } catch (const std::logic_error&) {
        throw UsageError("gamma: cannot parse '" + s + "'");
    }
    if (f.den == 0) throw UsageError("gamma: zero denominator");
    const auto g = std::gcd(f.num, f.den);
    if (g > 1) {
        f.num /= g;
        f.den /= g;
    }
    if (f.den > 1000) throw UsageError("gamma: reduced denominator must be at most 1000");
    return f;
}

std::string Fraction::str() const { return std::to_string(num) + "/" + std::to_string(den); }

std::vector<BoundReport> eval_bounds(unsigned t_lo, unsigned t_hi, unsigned k, const Fraction& gamma,
                                     std::uint64_t rho_budget) {
    if (t_lo < 2 || t_hi > 127 || t_lo > t_hi) throw UsageError("eval_bounds: need 2 <= t_lo <= t_hi <= 127");
    if (k < 3 || k % 2 == 0) throw UsageError("eval_bounds: k must be odd and >= 3");
    if (gamma.den == 0) throw UsageError("eval_bounds: zero denominator in gamma");
    std::vector<BoundReport> out;
    for (unsigned t = t_lo; t <= t_hi; ++t) {
        BoundReport rep;
        rep.t = t;
        rep.mersenne = mersenne(t);
        rep.factors = factor_mersenne(t, rho_budget);
        rep.complete = rep.factors.complete;
        if (rep.complete) rep.largest = rep.factors.factors.back().prime;
        const double td = t;
        const double kk = k;
        std::vector<BoundVerdict> v = {
            {"P > 2^(3t/4)", std::pow(2.0, 0.75 * td), false},
            {"P > 2^(gamma t), gamma = " + gamma.str(), std::pow(2.0, td * static_cast<double>(gamma.num) / static_cast<double>(gamma.den)), false},
            {"P >= (t/2)^(1+1/(k-2)), k = " + std::to_string(k), std::pow(td / 2.0, 1.0 + 1.0 / (kk - 2.0)), false},
            {"P >= (3/4) t^2", 0.75 * td * td, false},
        };
        if (rep.largest) {
            const BigInt P = BigInt(to_string_u128(*rep.largest));
            const BigInt two = 2;
            v[0].holds = boost::multiprecision::pow(P, 4) > boost::multiprecision::pow(two, 3 * t);
            v[1].holds = boost::multiprecision::pow(P, static_cast<unsigned>(gamma.den)) >
                         boost::multiprecision::pow(two, static_cast<unsigned>(gamma.num * t));
            v[2].holds = boost::multiprecision::pow(BigInt(t), k - 1) <=
                         boost::multiprecision::pow(two, k - 1) * boost::multiprecision::pow(P, k - 2);
            v[3].holds = 3 * BigInt(t) * t <= 4 * P;
        }
        rep.verdicts = std::move(v);
        out.push_back(std::move(rep));
    }
    return out;
}

ConverseReport converse_check(const std::vector<SearchRecord>& records, unsigned k) {
    if (k < 3 || k % 2 == 0) throw UsageError("converse_check: k must be odd and >= 3");
    ConverseReport rep;
    for (const auto& r : records) {
        if (!r.dep) continue;
        ++rep.checked;
        const BigInt p = r.p, t = r.t;
        if (boost::multiprecision::pow(t, k - 1) >
            boost::multiprecision::pow(BigInt(2), k - 1) * boost::multiprecision::pow(p, k - 2)) {
            rep.violations.push_back("p = " + std::to_string(r.p) + ", t = " + std::to_string(r.t) +
                                     ": p < (t/2)^(1+1/(k-2))");
        }
        if (3 * t * t > 4 * p) {
            rep.violations.push_back("p = " + std::to_string(r.p) + ", t = " + std::to_string(r.t) + ": p < (3/4) t^2");
        }
    }
    return rep;
}

LdcDemoReport ldc_demo(std::uint64_t p, std::size_t m, const std::vector<double>& deltas, std::uint64_t trials,
                       std::uint64_t seed) {
    if (p < 3 || p % 2 == 0 || !is_prime(p)) throw UsageError("ldc_demo: p must be an odd prime");
    const std::uint64_t t = ord2(p);
    const bool nec = necessary_cond_3(p, t);
    const bool odd = odd_t_filter(p, t);
    const std::string numbers = "t = " + std::to_string(t) + ", 3t^2 = " + std::to_string(3 * t * t) +
                                (nec ? " <= " : " > ") + "4p = " + std::to_string(4 * p) +
                                (odd ? ", t odd" : ", t even");
    if (!nec || !odd) {
        throw NotFoundError("p = " + std::to_string(p) + " has no three p-th roots of unity summing to zero (" +
                            numbers + ")");
    }
    AlgebraicNicePair pair;
    DependencyWitness witness;
    try {
        witness = extract_witness_3(p, seed);
        pair = build_nice_pair(p, seed);
    } catch (const NotFoundError&) {
        throw NotFoundError("p = " + std::to_string(p) + " passes both filters (" + numbers +
                            ") but no three p-th roots of unity sum to zero");
    }
    LdcDemoReport rep;
    rep.p = p;
    rep.t = t;
    rep.m = m;
    rep.witness = witness.to_text();
    rep.s1 = pair.s1;
    rep.s0 = pair.s0;
    const auto params = LdcParams::make(trivial_family(p, m), pair);
    rep.n = params.n();
    rep.length = params.length;

    Rng rng = make_rng(seed, 0);
    Message x(params.n());
    for (auto& b : x) b = static_cast<std::uint8_t>(rng() & 1u);
    const auto y = encode(params, x);
    rep.roundtrip_ok = true;
    for (std::size_t i = 0; i < params.n(); ++i) {
        if (decode_bit(params, y, i, rng()).bit != static_cast<bool>(x[i])) rep.roundtrip_ok = false;
    }
    rep.smoothness = smoothness_stats(params, 0);
    rep.smoothness.histogram.clear();
    for (std::size_t d = 0; d < deltas.size(); ++d) {
        rep.rows.push_back(simulate(params, deltas[d], trials, derive_seed(seed, d + 1)));
    }
    return rep;
}

} // namespace niceldc
