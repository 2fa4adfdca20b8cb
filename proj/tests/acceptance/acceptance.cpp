// Runs the nine acceptance criteria and prints one PASS/FAIL line for each.
// Exit status is nonzero when a criterion fails, except for criteria listed in
// kKnownDeviations, whose statement conflicts with the computed facts; those
// still print FAIL together with the reason.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "niceldc/errors.hpp"
#include "niceldc/ldc.hpp"
#include "niceldc/nicesets.hpp"
#include "niceldc/number_theory.hpp"
#include "niceldc/pipeline.hpp"
#include "niceldc/rootsum.hpp"

using namespace niceldc;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            notes.push_back("failed: " + what);
        }
    }
    void note(const std::string& s) { notes.push_back(s); }
};

const std::map<int, std::string> kKnownDeviations = {
    {1, "121369 < 10^6 has t = 39 and a dependency outside the sufficient condition, so the stated "
        "three-element set cannot be matched exactly"},
};

std::string join(const std::vector<std::uint64_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

std::vector<std::uint64_t> primes_with_order_at_most(unsigned t_max) {
    std::set<std::uint64_t> out;
    for (unsigned t = 2; t <= t_max; ++t) {
        for (const auto& f : factor_mersenne(t).factors) {
            const auto p = static_cast<std::uint64_t>(f.prime);
            if (p > 2 && ord2(p) == t) out.insert(p);
        }
    }
    return {out.begin(), out.end()};
}

RunConfig search_config(std::uint64_t hi, const std::string& checkpoint) {
    RunConfig cfg;
    cfg.lo = 3;
    cfg.hi = hi;
    cfg.checkpoint_path = checkpoint;
    return cfg;
}

std::vector<SearchRecord> g_found; // dependencies from the reproduction runs, for the converse check

Outcome criterion_1() {
    Outcome o;
    const auto res = run_search(search_config(1'000'000, ""));
    std::set<std::uint64_t> non_weil;
    std::map<std::uint64_t, bool> dep;
    for (const auto& r : res.records) {
        dep[r.p] = r.dep;
        if (r.dep && !r.weil) non_weil.insert(r.p);
        if (r.dep) g_found.push_back(r);
    }
    o.note("dependencies outside the sufficient condition: {" + join({non_weil.begin(), non_weil.end()}) + "}");
    o.require(non_weil == std::set<std::uint64_t>{73, 262657, 599479}, "set equals {73, 262657, 599479}");
    for (std::uint64_t m : {3ull, 7ull, 31ull, 127ull, 8191ull, 131071ull, 524287ull}) {
        o.require(dep.count(m) && dep[m], "Mersenne prime " + std::to_string(m) + " has a dependency");
    }
    return o;
}

Outcome criterion_2(const std::string& checkpoint) {
    Outcome o;
    const auto res = run_search(search_config(10'000'000, checkpoint));
    const auto& s = res.summary;
    std::set<std::pair<std::uint64_t, std::uint64_t>> non_weil;
    for (const auto& r : res.records) {
        if (r.dep && !r.weil) non_weil.insert({r.p, r.t});
        if (r.dep && r.p > 1'000'000) g_found.push_back(r);
    }
    std::string listed;
    for (const auto& [p, t] : non_weil) listed += (listed.empty() ? "" : ", ") + ("(" + std::to_string(p) + "," + std::to_string(t) + ")");
    o.note("non-Weil dependencies: " + listed);
    o.require(non_weil == std::set<std::pair<std::uint64_t, std::uint64_t>>{{73, 9}, {262657, 27}, {599479, 33}, {121369, 39}},
              "non-Weil set equals {(73,9), (262657,27), (599479,33), (121369,39)}");
    o.require(s.odd_primes == 664578, "odd-prime count 664578 (got " + std::to_string(s.odd_primes) + ")");
    auto compare = [&](const char* what, std::uint64_t got, std::uint64_t want) {
        o.note(std::string(what) + ": " + std::to_string(got) + " vs reference " + std::to_string(want) +
               (got == want ? " (match)" : " (MISMATCH)"));
    };
    compare("t <= sqrt(4p/3)", s.passed_nec3, 550);
    compare("t <= sqrt(4p/3) and t odd", s.passed_nec3_odd_t, 273);
    o.note("reference counts are stated for p <= 10^8; 664578 is the odd-prime count below 10^7, which is the range used");
    return o;
}

Outcome criterion_3() {
    Outcome o;
    const std::uint64_t p = 13264529;
    const auto t = ord2(p);
    o.require(t == 47, "t = 47");
    o.require(necessary_cond_3(p, t), "passes 3t^2 <= 4p");
    o.require(odd_t_filter(p, t), "passes the parity filter");
    const auto start = std::chrono::steady_clock::now();
    const bool g = gcd_test_3(p);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const auto c = class_test_3(p);
    o.require(!g, "gcd test finds none");
    o.require(!c.exponent, "class test finds none");
    char buf[96];
    std::snprintf(buf, sizeof buf, "gcd test %.1f s, class test over %llu classes", secs,
                  static_cast<unsigned long long>(c.classes_tested));
    o.note(buf);
    return o;
}

Outcome criterion_4() {
    Outcome o;
    std::size_t tested = 0, with_dep = 0;
    for (auto p : primes_with_order_at_most(16)) {
        ++tested;
        const bool g = gcd_test_3(p);
        const bool c = class_test_3(p, p).exponent.has_value();
        const auto bf = brute_force_deps(p, 3, {}, p);
        const bool b = bf.distinct_count && *bf.distinct_count > 0;
        o.require(bf.distinct_count.has_value(), "brute force completes for p = " + std::to_string(p));
        o.require(g == c && c == b, "three tests agree for p = " + std::to_string(p));
        if (c) {
            ++with_dep;
            const auto w = extract_witness_3(p, p);
            o.require(verify_witness(w), "witness re-verifies for p = " + std::to_string(p));
            // The canonical exponent set is seed-independent.
            o.require(extract_witness_3(p, p + 1).exponents == w.exponents, "canonical witness stable for p = " + std::to_string(p));
        }
    }
    o.note(std::to_string(tested) + " primes with ord2(p) <= 16, " + std::to_string(with_dep) + " with a dependency");
    return o;
}

Outcome criterion_5() {
    Outcome o;
    const auto prof = fourier_profile(7);
    bool coeffs = prof.coefficients.size() == 8 && prof.coefficients[0] == 7;
    for (std::size_t a = 1; coeffs && a < 8; ++a) coeffs = prof.coefficients[a] == -1;
    o.require(coeffs, "p = 7 coefficients are (7, -1 x 7)");
    o.require(prof.parseval_sum == 56, "p = 7 Parseval sum 56");
    o.require(fourier_moment(prof, 3) == 42, "p = 7 M3 = 42");
    o.require(brute_force_deps(7, 3).ordered_count == 42, "p = 7 brute-force ordered count 42");
    std::size_t checked = 0;
    for (auto p : primes_with_order_at_most(12)) {
        const auto pr = fourier_profile(p, 5, kFourierTLimit, p);
        for (unsigned k : {3u, 5u}) {
            const auto bf = brute_force_deps(p, k, {}, p);
            o.require(fourier_moment(pr, k) == BigInt(to_string_u128(bf.ordered_count)),
                      "M" + std::to_string(k) + " matches for p = " + std::to_string(p));
        }
        ++checked;
    }
    o.note(std::to_string(checked) + " primes with t <= 12, k in {3, 5}");
    return o;
}

Outcome criterion_6() {
    Outcome o;
    std::size_t count = 0;
    for (auto p : sieve_primes(3, 10000)) {
        const auto t = ord2(p);
        if (!necessary_cond_3(p, t) || !odd_t_filter(p, t) || !class_test_3(p).exponent) continue;
        ++count;
        const auto pair = build_nice_pair(p);
        o.require(static_cast<bool>(verify_algebraic_niceness(p, pair.s0, pair.s1)), "verifier accepts p = " + std::to_string(p));
        o.require(pair.s1.size() == 3, "|S1| = 3 for p = " + std::to_string(p));
        o.require(pair.s0.size() >= (p + 1) / 2, "|S0| >= ceil(p/2) for p = " + std::to_string(p));
        if (p == 7) {
            o.require(pair.s1 == ResidueSet{0, 1, 3}, "p = 7 S1 = {0,1,3}");
            o.require(pair.s0.size() == 4, "p = 7 |S0| = 4");
        }
    }
    o.note(std::to_string(count) + " primes below 10^4 with a dependency");
    return o;
}

Outcome criterion_7() {
    Outcome o;
    const auto prm = LdcParams::make(trivial_family(7, 4), build_nice_pair(7));
    o.require(prm.length == 2401, "N = 2401");
    std::uint64_t decodes = 0;
    bool perfect = true;
    for (unsigned mask = 0; mask < 16; ++mask) {
        Message x(4);
        for (int j = 0; j < 4; ++j) x[j] = (mask >> j) & 1u;
        const auto y = encode(prm, x);
        for (std::size_t i = 0; i < 4; ++i) {
            for (std::uint64_t idx = 0; idx < prm.length; ++idx) {
                const auto w = index_to_point(idx, 7, 4);
                if (!std::binary_search(prm.nice.s0.begin(), prm.nice.s0.end(), dot(prm.family.u[i], w, 7))) continue;
                ++decodes;
                perfect = perfect && decode_at(prm, y, i, w).bit == static_cast<bool>(x[i]);
            }
        }
    }
    o.require(perfect, "perfect decoding at delta = 0");
    o.note(std::to_string(decodes) + " exhaustive decodes at delta = 0");
    for (double delta : {0.01, 0.03, 0.05}) {
        const auto r = simulate(prm, delta, 10000, derive_seed(7, static_cast<std::uint64_t>(delta * 1000)));
        char buf[128];
        std::snprintf(buf, sizeof buf, "delta %.2f: rate %.4f, bound %.2f + slack %.4f", delta, r.rate, r.bound, r.slack);
        o.note(buf);
        o.require(r.rate <= 6 * delta + r.slack, std::string("error within bound at ") + buf);
    }
    for (std::size_t i = 0; i < 4; ++i) {
        const auto st = smoothness_stats(prm, i);
        o.require(st.flat && st.outside_hits == 0, "flat histogram on T_" + std::to_string(i));
        o.require(st.t_size == 1372 && 2 * st.t_size >= prm.length, "|T_" + std::to_string(i) + "| = 1372 >= N/2");
    }
    return o;
}

Outcome criterion_8() {
    Outcome o;
    const auto r = eval_bounds(23, 23, 3, Fraction{3, 4}).at(0);
    o.require(r.largest && *r.largest == 178481, "P(2^23 - 1) = 178481");
    o.require(r.verdicts.at(0).holds, "178481 > 2^17.25");
    char buf[96];
    std::snprintf(buf, sizeof buf, "2^17.25 = %.1f", r.verdicts.at(0).threshold);
    o.note(buf);
    if (g_found.empty()) {
        for (const auto& rec : run_search(search_config(1'000'000, "")).records) {
            if (rec.dep) g_found.push_back(rec);
        }
    }
    const auto conv = converse_check(g_found);
    o.require(conv.ok(), "converse check");
    for (const auto& v : conv.violations) o.note(v);
    o.note("converse check over " + std::to_string(conv.checked) + " dependencies");
    return o;
}

Outcome criterion_9(const std::string& scratch) {
    Outcome o;
    // Matching families.
    o.require(static_cast<bool>(verify_matching(trivial_family(7, 4))), "trivial family verifies");
    const auto inc = incidence_family(7, 7);
    const auto sq = tensor_power_family(inc, 2);
    o.require(static_cast<bool>(verify_matching(sq)) && sq.s == ResidueSet{1, 2, 4}, "tensor square verifies over <2>");
    for (std::size_t i = 0; i < sq.n(); ++i) {
        o.require(dot(sq.u[i], sq.v[i], 7) == 0, "tensor square keeps (u_i, v_i) = 0");
        for (std::size_t j = 0; j < sq.n(); ++j) {
            if (i != j) o.require(dot(sq.u[j], sq.v[i], 7) == powmod64(dot(inc.u[j], inc.v[i], 7), 2, 7), "cross products squared");
        }
    }
    auto broken = trivial_family(7, 4);
    broken.v[0] = broken.u[0];
    o.require(!verify_matching(broken), "broken family rejected");

    // Dot-product claim.
    std::mt19937_64 rng(9);
    int claims = 0;
    for (int it = 0; it < 1000; ++it) {
        const std::uint64_t ps[] = {3, 7, 73};
        const std::uint64_t p = ps[it % 3];
        const std::size_t h = 1 + rng() % 3, len = 1 + rng() % 3;
        ZpPolynomial f{p, h, {}};
        for (std::size_t k = 0, n = 1 + rng() % 3; k < n; ++k) {
            ZpMonomial m{rng() % p, std::vector<unsigned>(h, 0)};
            unsigned budget = static_cast<unsigned>(rng() % 4);
            for (std::size_t v = 0; v < h && budget; ++v) {
                const unsigned e = static_cast<unsigned>(rng() % (budget + 1));
                m.exponents[v] = e;
                budget -= e;
            }
            f.terms.push_back(m);
        }
        std::vector<ZpVector> us(h, ZpVector(len)), vs(h, ZpVector(len));
        for (auto& u : us) for (auto& x : u) x = rng() % p;
        for (auto& v : vs) for (auto& x : v) x = rng() % p;
        claims += check_poly_dot_claim(f, us, vs);
    }
    o.require(claims == 1000, "dot-product claim on 1000 random instances (" + std::to_string(claims) + " held)");

    // Image law.
    bool image_ok = true;
    for (auto p : sieve_primes(3, 10000)) {
        const auto t = ord2(p);
        std::set<std::uint64_t> image;
        for (std::uint64_t z = 1; z < p; ++z) image.insert(powmod64(z, (p - 1) / t, p));
        image_ok = image_ok && std::vector<std::uint64_t>(image.begin(), image.end()) == subgroup_2(p);
    }
    o.require(image_ok, "image law for p <= 10^4");

    // Determinism and resume.
    auto export_of = [](const SearchResult& r) {
        std::ostringstream os;
        write_jsonl(os, r.records, r.summary);
        return os.str();
    };
    RunConfig cfg = search_config(300000, "");
    cfg.chunk_width = 20000;
    const auto a = export_of(run_search(cfg));
    cfg.threads = 2;
    const auto b = export_of(run_search(cfg));
    o.require(a == b, "identical exports across runs and thread counts");
    cfg.checkpoint_path = (fs::path(scratch) / "resume.ckpt").string();
    fs::remove(cfg.checkpoint_path);
    fs::remove(cfg.checkpoint_path + ".records.jsonl");
    cfg.stop_after_chunks = 4;
    run_search(cfg);
    // Rewind the checkpoint to an arbitrary prime, as after a crash before the rename.
    {
        std::ofstream ck(cfg.checkpoint_path, std::ios::trunc);
        ck << cfg.fingerprint() << '\n' << 40009 << '\n';
    }
    cfg.stop_after_chunks = 0;
    o.require(export_of(run_search(cfg)) == a, "resumed export identical to uninterrupted export");
    return o;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    bool skip_long = false;
    std::string scratch = (fs::temp_directory_path() / "niceldc_acceptance").string();
    std::vector<int> only;
    app.add_flag("--skip-long", skip_long, "Skip the run over [3, 10^7]");
    app.add_option("--scratch", scratch, "Directory for checkpoints");
    app.add_option("--only", only, "Run only these criteria");
    CLI11_PARSE(app, argc, argv);
    fs::create_directories(scratch);

    const std::string long_ckpt = (fs::path(scratch) / "range_1e7.ckpt").string();
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"search over [3, 10^6]", criterion_1},
        {"search over [3, 10^7]", [&] { return criterion_2(long_ckpt); }},
        {"negative control p = 13264529", criterion_3},
        {"gcd, class and brute-force tests agree for ord2(p) <= 16", criterion_4},
        {"Fourier moments", criterion_5},
        {"nice sets for every dependency below 10^4", criterion_6},
        {"p = 7, m = 4 code", criterion_7},
        {"bound evaluators and converse check", criterion_8},
        {"property suites", [&] { return criterion_9(scratch); }},
    };

    int hard_failures = 0, failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i + 1);
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
        if (id == 2 && skip_long) {
            std::printf("SKIP %d  %s (--skip-long)\n", id, criteria[i].first.c_str());
            continue;
        }
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.notes.push_back(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s %d  %s  (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(), secs);
        for (const auto& n : o.notes) std::printf("        %s\n", n.c_str());
        if (!o.pass) {
            ++failures;
            if (auto it = kKnownDeviations.find(id); it != kKnownDeviations.end()) {
                std::printf("        known deviation: %s\n", it->second.c_str());
            } else {
                ++hard_failures;
            }
        }
        std::fflush(stdout);
    }
    if (fs::exists(long_ckpt)) {
        fs::remove(long_ckpt);
        fs::remove(long_ckpt + ".records.jsonl");
    }
    std::printf("%d failing, %d of them known deviations\n", failures, failures - hard_failures);
    return hard_failures ? 1 : 0;
}
