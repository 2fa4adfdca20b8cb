#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include "niceldc/errors.hpp"
#include "niceldc/nicesets.hpp"
#include "niceldc/number_theory.hpp"
#include "oracles.hpp"

using namespace niceldc;

namespace {

Gf2Poly poly(std::initializer_list<std::uint64_t> exps) { return Gf2Poly::from_exponents(std::vector(exps)); }

// |S0 cap (alpha + beta S1)| even for all alpha and all beta in <2>.
bool oracle_nice(std::uint64_t p, const ResidueSet& s0, const ResidueSet& s1) {
    if (s0.empty() || s1.size() % 2 == 0) return false;
    std::vector<bool> in0(p, false);
    for (auto x : s0) in0[x] = true;
    std::uint64_t beta = 1;
    do {
        for (std::uint64_t alpha = 0; alpha < p; ++alpha) {
            unsigned c = 0;
            for (auto g : s1) c += in0[(alpha + beta * g) % p];
            if (c % 2) return false;
        }
        beta = beta * 2 % p;
    } while (beta != 1);
    return true;
}

bool has_dependency(std::uint64_t p) {
    const auto t = ord2(p);
    return necessary_cond_3(p, t) && odd_t_filter(p, t) && class_test_3(p).exponent.has_value();
}

std::uint64_t cross_dot(const MatchingFamily& f, std::size_t j, std::size_t i) { return dot(f.u[j], f.v[i], f.p); }

} // namespace

TEST_CASE("subgroup generated by 2") {
    CHECK(subgroup_2(7) == ResidueSet{1, 2, 4});
    CHECK(subgroup_2(73).size() == 9);
    CHECK(subgroup_2(3) == ResidueSet{1, 2});
}

TEST_CASE("power-map image law") {
    for (auto p : sieve_primes(3, 10000)) {
        const auto t = ord2(p);
        std::set<std::uint64_t> image;
        for (std::uint64_t z = 1; z < p; ++z) image.insert(powmod64(z, (p - 1) / t, p));
        const auto sub = subgroup_2(p);
        REQUIRE(std::vector<std::uint64_t>(image.begin(), image.end()) == sub);
    }
}

TEST_CASE("S1 from witnesses") {
    CHECK(build_s1(extract_witness_3(7)) == ResidueSet{0, 1, 3});
    CHECK(build_s1(extract_witness_3(3)) == ResidueSet{0, 1, 2});
    auto bad = extract_witness_3(7);
    bad.exponents = {0, 1, 2};
    CHECK_THROWS_AS(build_s1(bad), UsageError);
}

TEST_CASE("tau") {
    CHECK(compute_tau(7, {0, 1, 3}) == poly({3, 1, 0}));
    CHECK(compute_tau(7, {0}) == Gf2Poly::one());
    CHECK(compute_tau(3, {0, 1, 2}) == poly({2, 1, 0}));
}

TEST_CASE("tau divides x^p + 1 and is nonconstant exactly for dependencies") {
    std::mt19937_64 rng(6);
    for (std::uint64_t p : {7ull, 31ull, 73ull, 127ull}) {
        const auto w = extract_witness_3(p);
        const std::uint64_t mod = w.modulus.word(0), gen = w.generator.word(0);
        auto mulf = [&](std::uint64_t a, std::uint64_t b) { return oracle::mod(oracle::mul(a, b), mod); };
        std::vector<std::uint64_t> powers(p);
        powers[0] = 1;
        for (std::uint64_t e = 1; e < p; ++e) powers[e] = mulf(powers[e - 1], gen);
        for (int it = 0; it < 60; ++it) {
            std::set<std::uint64_t> s;
            const std::size_t size = 2 * (rng() % 3) + 1;
            while (s.size() < size) s.insert(rng() % p);
            const ResidueSet s1(s.begin(), s.end());
            const auto tau = compute_tau(p, s1);
            CHECK(poly_mod(Gf2Poly::monomial(p) + Gf2Poly::one(), tau).is_zero());
            bool dependent = false;
            for (std::uint64_t j = 1; j < p && !dependent; ++j) {
                std::uint64_t sum = 0;
                for (auto e : s1) sum ^= powers[e * j % p];
                dependent = sum == 0;
            }
            CHECK(!tau.is_constant() == dependent);
        }
    }
}

TEST_CASE("S0 construction and the niceness verifier") {
    const auto s0 = build_s0(7, {0, 1, 3});
    CHECK(s0.size() == 4);
    CHECK(oracle_nice(7, s0, {0, 1, 3}));
    CHECK(build_s0(3, {0, 1, 2}).size() == 2);
    CHECK_THROWS_AS(build_s0(7, {0}), UsageError);

    CHECK(verify_algebraic_niceness(7, {0, 2, 3, 4}, {0, 1, 3}));
    CHECK(oracle_nice(7, {0, 2, 3, 4}, {0, 1, 3}));
    const auto bad = verify_algebraic_niceness(7, {0}, {0, 1, 3});
    REQUIRE(bad.violation.has_value());
    CHECK(bad.violation->a == 0u);
    CHECK_FALSE(verify_algebraic_niceness(7, {}, {0, 1, 3}));
    CHECK_FALSE(verify_algebraic_niceness(7, s0, {0, 1}));

    std::mt19937_64 rng(12);
    for (int it = 0; it < 300; ++it) {
        ResidueSet a, b;
        for (std::uint64_t x = 0; x < 7; ++x) {
            if (rng() & 1) a.push_back(x);
            if (rng() & 1) b.push_back(x);
        }
        CHECK(static_cast<bool>(verify_algebraic_niceness(7, a, b)) == oracle_nice(7, a, b));
    }
}

TEST_CASE("nice pairs for every dependency below 10^4") {
    for (auto p : sieve_primes(3, 10000)) {
        if (!has_dependency(p)) continue;
        const auto pair = build_nice_pair(p);
        CHECK(pair.s1.size() % 2 == 1);
        CHECK(pair.s0.size() >= (p + 1) / 2);
        CHECK(oracle_nice(p, pair.s0, pair.s1));
    }
}

TEST_CASE("randomized S0 search") {
    for (std::uint64_t p : {73ull, 8191ull}) {
        BuildS0Options opts;
        opts.exhaustive_dim = 5;
        opts.seed = 3;
        const auto s1 = build_s1(extract_witness_3(p));
        const auto s0 = build_s0(p, s1, opts);
        CHECK(s0.size() >= (p + 1) / 2);
        CHECK(oracle_nice(p, s0, s1));
    }
}

TEST_CASE("nice pair persistence") {
    const auto pair = build_nice_pair(73);
    std::stringstream ss;
    pair.write(ss);
    const auto back = AlgebraicNicePair::read(ss);
    CHECK(back.p == pair.p);
    CHECK(back.s0 == pair.s0);
    CHECK(back.s1 == pair.s1);
    CHECK(back.tau == pair.tau);
    CHECK_THROWS_AS(AlgebraicNicePair::make(7, {0, 1, 3}, {0}), UsageError);
}

TEST_CASE("trivial family") {
    const auto f = trivial_family(7, 4);
    CHECK(f.n() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) CHECK(cross_dot(f, j, i) == (i == j ? 0u : 1u));
    }
    CHECK(verify_matching(f));
    CHECK(verify_matching(trivial_family(73, 10)));
    CHECK_THROWS_AS(trivial_family(7, 1), UsageError);
}

TEST_CASE("incidence family") {
    const auto f = incidence_family(7, 7);
    CHECK(f.n() == 7);
    for (std::size_t i = 0; i < 7; ++i) {
        for (std::size_t j = 0; j < 7; ++j) CHECK(cross_dot(f, j, i) == (i == j ? 0u : 1u));
    }
    const auto g = incidence_family(3, 4);
    CHECK(g.n() == 6);
    for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = 0; j < 6; ++j) {
            if (i != j) CHECK((cross_dot(g, j, i) == 1 || cross_dot(g, j, i) == 2));
        }
    }
    CHECK(verify_matching(g));
    CHECK_THROWS_AS(incidence_family(7, 5), UsageError);
}

TEST_CASE("tensor powers") {
    const auto inc = incidence_family(7, 7);
    const auto sq = tensor_power_family(inc, 2);
    CHECK(sq.s == ResidueSet{1, 2, 4});
    CHECK(verify_matching(sq));
    const auto same = tensor_power_family(incidence_family(3, 4), 1);
    CHECK(verify_matching(same));
    CHECK(same.s == ResidueSet{1, 2});

    for (std::uint64_t p : {3ull, 5ull, 7ull}) {
        for (std::size_t m : {p, p + 1}) {
            const auto fam = incidence_family(p, m);
            if (fam.n() > 50) continue;
            for (unsigned w : {1u, 2u, 3u}) {
                const auto tp = tensor_power_family(fam, w);
                for (std::size_t i = 0; i < fam.n(); ++i) {
                    for (std::size_t j = 0; j < fam.n(); ++j) {
                        CHECK(cross_dot(tp, j, i) == powmod64(cross_dot(fam, j, i), w, p));
                    }
                }
            }
        }
    }
    CHECK_THROWS_AS(tensor_power_family(inc, 20), ResourceLimitError);
}

TEST_CASE("matching verifier rejects a bad diagonal") {
    auto f = trivial_family(7, 4);
    f.v[0] = f.u[0];
    const auto r = verify_matching(f);
    REQUIRE(r.violation.has_value());
    CHECK(r.violation->a == 0u);
}

TEST_CASE("matching family persistence") {
    const auto f = incidence_family(5, 6);
    std::stringstream ss;
    f.write(ss);
    const auto back = MatchingFamily::read(ss);
    CHECK(back.u == f.u);
    CHECK(back.v == f.v);
    CHECK(back.s == f.s);
}

TEST_CASE("polynomial vectors") {
    const ZpPolynomial x1{7, 1, {{1, {1}}}};
    CHECK(poly_vector(x1, {{3, 5, 6}}) == ZpVector{3, 5, 6});
    const ZpPolynomial x1x2{7, 2, {{1, {1, 1}}}};
    CHECK(poly_vector(x1x2, {{1, 2}, {3, 4}}) == ZpVector{3, 4, 6, 1});
    const ZpPolynomial f{7, 1, {{3, {2}}}};
    CHECK(poly_vector(f, {{1, 2}}) == ZpVector{3, 6, 6, 5});
}

TEST_CASE("dot-product claim on random instances") {
    std::mt19937_64 rng(2024);
    for (int it = 0; it < 1000; ++it) {
        const std::uint64_t primes[] = {3, 7, 73};
        const std::uint64_t p = primes[it % 3];
        const std::size_t h = 1 + rng() % 3, len = 1 + rng() % 3;
        ZpPolynomial f{p, h, {}};
        const std::size_t terms = 1 + rng() % 3;
        for (std::size_t k = 0; k < terms; ++k) {
            ZpMonomial m{rng() % p, std::vector<unsigned>(h, 0)};
            unsigned budget = static_cast<unsigned>(rng() % 4);
            for (std::size_t v = 0; v < h && budget; ++v) {
                const unsigned e = static_cast<unsigned>(rng() % (budget + 1));
                m.exponents[v] = e;
                budget -= e;
            }
            f.terms.push_back(std::move(m));
        }
        std::vector<ZpVector> us(h, ZpVector(len)), vs(h, ZpVector(len));
        for (auto& u : us) {
            for (auto& x : u) x = rng() % p;
        }
        for (auto& v : vs) {
            for (auto& x : v) x = rng() % p;
        }
        REQUIRE(check_poly_dot_claim(f, us, vs));
    }
    // f = x1 + x2.
    const ZpPolynomial sum{7, 2, {{1, {1, 0}}, {1, {0, 1}}}};
    CHECK(check_poly_dot_claim(sum, {{1, 2}, {3, 4}}, {{5, 6}, {0, 1}}));
    // Right-hand side keeps the coefficient 3 instead of 1.
    const ZpPolynomial three{7, 1, {{3, {1}}}};
    CHECK_FALSE(check_poly_dot_claim(three, three, {{1, 2}}, {{1, 1}}));
}
