#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "niceldc/errors.hpp"
#include "niceldc/number_theory.hpp"
#include "niceldc/pipeline.hpp"
#include "niceldc/rootsum.hpp"

using namespace niceldc;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("niceldc_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string jsonl(const SearchResult& r) {
    std::ostringstream os;
    write_jsonl(os, r.records, r.summary);
    return os.str();
}

RunConfig config(std::uint64_t lo, std::uint64_t hi) {
    RunConfig cfg;
    cfg.lo = lo;
    cfg.hi = hi;
    cfg.threads = 1;
    cfg.chunk_width = 4096;
    return cfg;
}

} // namespace

TEST_CASE("method names") {
    CHECK(parse_method("class") == Method::class_scan);
    CHECK(parse_method("gcd") == Method::gcd);
    CHECK(parse_method("both") == Method::both);
    CHECK(to_string(Method::class_scan) == "class");
    CHECK_THROWS_AS(parse_method("brute"), UsageError);
}

TEST_CASE("per-prime records") {
    RunConfig cfg;
    const auto neg = search_prime(13264529, cfg);
    REQUIRE(neg.has_value());
    CHECK(neg->t == 47);
    CHECK(neg->nec3);
    CHECK(neg->odd_t);
    CHECK_FALSE(neg->weil);
    CHECK_FALSE(neg->dep);
    CHECK_FALSE(neg->witness.has_value());

    const auto r73 = search_prime(73, cfg);
    REQUIRE(r73.has_value());
    CHECK(r73->dep);
    CHECK_FALSE(r73->weil);
    CHECK(r73->witness == std::vector<std::uint64_t>{0, 1, 9});
    CHECK(r73->ms == 0);

    CHECK_FALSE(search_prime(5, cfg).has_value());  // t even
    CHECK_FALSE(search_prime(11, cfg).has_value()); // t = 10 too large
    SearchSummary counters;
    search_prime(11, cfg, &counters);
    CHECK(counters.odd_primes == 1);
    CHECK(counters.passed_nec3 == 0);
}

TEST_CASE("record invariants and method agreement on [3, 30000]") {
    auto cfg = config(3, 30000);
    cfg.method = Method::both;
    const auto both = run_search(cfg);
    CHECK(both.completed);
    for (const auto& r : both.records) {
        CHECK(r.nec3);
        CHECK(r.odd_t);
        if (r.weil) CHECK(r.dep);
        if (r.dep) CHECK(r.witness.has_value());
        CHECK(is_prime(r.p));
    }
    cfg.method = Method::gcd;
    const auto gcd = run_search(cfg);
    cfg.method = Method::class_scan;
    const auto cls = run_search(cfg);
    REQUIRE(gcd.records.size() == cls.records.size());
    for (std::size_t i = 0; i < cls.records.size(); ++i) {
        CHECK(gcd.records[i].p == cls.records[i].p);
        CHECK(gcd.records[i].dep == cls.records[i].dep);
        CHECK(gcd.records[i].witness == cls.records[i].witness);
    }
    CHECK(gcd.summary.counters() == cls.summary.counters());
    CHECK(converse_check(cls.records).ok());
}

TEST_CASE("summary counters") {
    const auto r = run_search(config(1, 100));
    const auto& s = r.summary;
    CHECK(s.odd_primes == 24);
    std::uint64_t nec = 0, odd = 0, both = 0;
    for (auto p : sieve_primes(3, 100)) {
        const auto t = ord2(p);
        nec += necessary_cond_3(p, t);
        odd += odd_t_filter(p, t);
        both += necessary_cond_3(p, t) && odd_t_filter(p, t);
    }
    CHECK(s.passed_nec3 == nec);
    CHECK(s.passed_odd_t == odd);
    CHECK(s.passed_nec3_odd_t == both);
    CHECK(r.records.size() == both);
    CHECK(s.non_weil == 1); // 73
    CHECK_THROWS_AS(run_search(config(100, 10)), UsageError);
}

TEST_CASE("determinism across runs and thread counts") {
    auto cfg = config(3, 200000);
    cfg.chunk_width = 5000;
    const auto a = jsonl(run_search(cfg));
    cfg.threads = 3;
    const auto b = jsonl(run_search(cfg));
    cfg.chunk_width = 777;
    const auto c = jsonl(run_search(cfg));
    CHECK(a == b);
    CHECK(a == c);
}

TEST_CASE("checkpoint resume reproduces the uninterrupted export") {
    TempDir dir;
    auto cfg = config(3, 150000);
    cfg.chunk_width = 10000;
    const auto reference = jsonl(run_search(cfg));

    SUBCASE("stop after a few chunks") {
        cfg.checkpoint_path = dir.file("run.ckpt");
        for (std::uint64_t stop : {1u, 3u, 2u}) {
            cfg.stop_after_chunks = stop;
            const auto part = run_search(cfg);
            CHECK_FALSE(part.completed);
        }
        cfg.stop_after_chunks = 0;
        const auto done = run_search(cfg);
        CHECK(done.completed);
        CHECK(jsonl(done) == reference);
        std::istringstream ck(slurp(cfg.checkpoint_path));
        std::string hash, last;
        std::getline(ck, hash);
        std::getline(ck, last);
        CHECK(hash == cfg.fingerprint());
        CHECK(last == "149993");
    }

    SUBCASE("crash between the record append and the checkpoint rename") {
        cfg.checkpoint_path = dir.file("crash.ckpt");
        cfg.stop_after_chunks = 5;
        run_search(cfg);
        // Pretend the checkpoint lags behind: only primes <= 20011 committed,
        // while the sidecar already holds later records.
        for (std::uint64_t last : {20011ull, 73ull, 2ull, 40009ull}) {
            std::ofstream(cfg.checkpoint_path, std::ios::trunc) << cfg.fingerprint() << '\n' << last << '\n';
            cfg.stop_after_chunks = 0;
            CHECK(jsonl(run_search(cfg)) == reference);
        }
    }

    SUBCASE("a different configuration is refused") {
        cfg.checkpoint_path = dir.file("other.ckpt");
        cfg.stop_after_chunks = 1;
        run_search(cfg);
        auto other = cfg;
        other.seed = 99;
        CHECK_THROWS_AS(run_search(other), UsageError);
        other = cfg;
        other.hi = 150001;
        CHECK_THROWS_AS(run_search(other), UsageError);
    }
}

TEST_CASE("export formats") {
    TempDir dir;
    auto cfg = config(3, 600000);
    const auto res = run_search(cfg);
    export_run(dir.file("a.jsonl"), res.records, res.summary);
    export_run(dir.file("a.csv"), res.records, res.summary);
    const auto from_jsonl = load_run(dir.file("a.jsonl"));
    const auto from_csv = load_run(dir.file("a.csv"));
    CHECK(from_jsonl.records == res.records);
    CHECK(from_csv.records == res.records);
    CHECK(from_jsonl.summary == res.summary);
    CHECK(from_csv.summary == res.summary);

    // Same configuration, same bytes.
    export_run(dir.file("b.jsonl"), run_search(cfg).records, res.summary);
    CHECK(slurp(dir.file("a.jsonl")) == slurp(dir.file("b.jsonl")));

    const auto first = slurp(dir.file("a.jsonl")).substr(0, slurp(dir.file("a.jsonl")).find('\n'));
    CHECK(first == R"({"p":3,"t":2,"nec3":true,"odd_t":true,"weil":true,"dep":true,"method":"class","witness":[0,1,2],"ms":0})");
    const auto csv = slurp(dir.file("a.csv"));
    CHECK(csv.rfind("p,t,nec3,odd_t,weil,dep,method,witness,ms\n3,2,true,true,true,true,class,\"0,1,2\",0\n", 0) == 0);

    // Empty run: header only, zeroed counters.
    SearchSummary empty;
    std::ostringstream ej, ec;
    write_jsonl(ej, {}, empty);
    write_csv(ec, {}, empty);
    CHECK(ej.str() ==
          R"({"summary":{"lo":0,"hi":0,"method":"","seed":0,"odd_primes":0,"passed_nec3":0,"passed_odd_t":0,"passed_nec3_odd_t":0,"dependencies":0,"non_weil":0,"weil_sufficient":0}})"
          "\n");
    std::istringstream ecin(ec.str());
    std::string header;
    std::getline(ecin, header);
    CHECK(header == "p,t,nec3,odd_t,weil,dep,method,witness,ms");
    CHECK(read_csv(ecin).records.empty());

    // Quoting survives awkward field contents.
    SearchRecord odd;
    odd.p = 7;
    odd.method = "a,\"b\"";
    odd.ms = 5;
    std::stringstream qs;
    write_csv(qs, {odd}, empty);
    CHECK(read_csv(qs).records == std::vector<SearchRecord>{odd});
}

TEST_CASE("fractions") {
    const auto a = Fraction::parse("0.75");
    CHECK(a.num == 3);
    CHECK(a.den == 4);
    const auto b = Fraction::parse("6/8");
    CHECK(b.num == 3);
    CHECK(b.den == 4);
    CHECK(Fraction::parse("1").str() == "1/1");
    CHECK_THROWS_AS(Fraction::parse("abc"), UsageError);
    CHECK_THROWS_AS(Fraction::parse("1/0"), UsageError);
    CHECK_THROWS_AS(Fraction::parse("1/1009"), UsageError);
}

TEST_CASE("bound evaluation") {
    const auto r23 = eval_bounds(23, 23, 3, Fraction::parse("3/4")).at(0);
    REQUIRE(r23.largest.has_value());
    CHECK(*r23.largest == 178481);
    CHECK(r23.verdicts.at(0).holds);
    CHECK(r23.verdicts.at(0).threshold == doctest::Approx(155871.6).epsilon(1e-6));

    const auto r9 = eval_bounds(9, 9, 3, Fraction::parse("3/4")).at(0);
    CHECK(*r9.largest == 73);
    CHECK(r9.verdicts.at(3).threshold == doctest::Approx(60.75));
    CHECK(r9.verdicts.at(3).holds);

    const auto r2 = eval_bounds(2, 2, 3, Fraction::parse("3/4")).at(0);
    CHECK(*r2.largest == 3);
    CHECK(r2.verdicts.at(2).threshold == doctest::Approx(1.0));
    CHECK(r2.verdicts.at(2).holds);

    for (const auto& r : eval_bounds(2, 127, 3, Fraction::parse("1/2"))) {
        if (!r.largest) continue;
        CHECK(r.mersenne % *r.largest == 0);
        CHECK(is_prime_u128(*r.largest));
        // The 3/4 and gamma = 1/2 verdicts agree with floating point away from ties.
        const double P = static_cast<double>(*r.largest);
        if (std::abs(std::log2(P) - 0.75 * r.t) > 1e-6) CHECK(r.verdicts[0].holds == (std::log2(P) > 0.75 * r.t));
        if (std::abs(std::log2(P) - 0.5 * r.t) > 1e-6) CHECK(r.verdicts[1].holds == (std::log2(P) > 0.5 * r.t));
    }
    CHECK_THROWS_AS(eval_bounds(1, 5, 3, Fraction{}), UsageError);
    CHECK_THROWS_AS(eval_bounds(2, 128, 3, Fraction{}), UsageError);
    CHECK_THROWS_AS(eval_bounds(2, 5, 4, Fraction{}), UsageError);
}

TEST_CASE("converse check") {
    auto rec = [](std::uint64_t p, std::uint64_t t) {
        SearchRecord r;
        r.p = p;
        r.t = t;
        r.dep = true;
        return r;
    };
    const auto ok = converse_check({rec(73, 9), rec(599479, 33), rec(7, 3)});
    CHECK(ok.ok());
    CHECK(ok.checked == 3);
    const auto bad = converse_check({rec(73, 11)});
    CHECK_FALSE(bad.ok());
    auto skipped = rec(5, 40);
    skipped.dep = false;
    CHECK(converse_check({skipped}).checked == 0);
}

TEST_CASE("end-to-end code demo") {
    const auto rep = ldc_demo(7, 4, {0.0, 0.05}, 10000, 1);
    CHECK(rep.length == 2401);
    CHECK(rep.s1.size() == 3);
    CHECK(rep.s0.size() == 4);
    CHECK(rep.roundtrip_ok);
    CHECK(rep.smoothness.flat);
    CHECK(rep.smoothness.t_size == 1372);
    CHECK(rep.rows.at(0).errors == 0);
    CHECK(rep.rows.at(1).rate <= 0.3 + rep.rows.at(1).slack);

    const auto small = ldc_demo(3, 5, {0.0}, 1000, 2);
    CHECK(small.length == 243);
    CHECK(small.rows.at(0).errors == 0);

    try {
        ldc_demo(5, 3, {0.0}, 10, 0);
        FAIL("expected a refusal");
    } catch (const NotFoundError& e) {
        CHECK(std::string(e.what()).find("t = 4") != std::string::npos);
    }
    CHECK_THROWS_AS(ldc_demo(13264529, 2, {0.0}, 10, 0), NotFoundError);
    CHECK_THROWS_AS(ldc_demo(9, 2, {0.0}, 10, 0), UsageError);
}
