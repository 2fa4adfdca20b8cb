#include "niceldc/nicesets.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <ostream>
#include <sstream>

#include "niceldc/errors.hpp"
#include "niceldc/number_theory.hpp"
#include "niceldc/rng.hpp"

namespace niceldc {

namespace {

void require_odd_prime(std::uint64_t p, const char* who) {
    if (p < 3 || p % 2 == 0 || !is_prime(p)) throw UsageError(std::string(who) + ": p must be an odd prime");
}

ResidueSet normalized(ResidueSet s, std::uint64_t p, const char* who) {
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw UsageError(std::string(who) + ": repeated residue");
    if (!s.empty() && s.back() >= p) throw UsageError(std::string(who) + ": residue out of range");
    return s;
}

std::string join(const std::vector<std::uint64_t>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(v[i]);
    }
    return out;
}

std::vector<std::uint64_t> parse_list(const std::string& line) {
    std::vector<std::uint64_t> out;
    if (line.empty()) return out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        out.push_back(std::stoull(item, &used));
        if (used != item.size()) throw UsageError("fixture: bad residue '" + item + "'");
    }
    return out;
}

std::string next_line(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw UsageError("fixture: unexpected end of input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

std::vector<std::uint64_t> parse_header(std::istream& is) {
    std::istringstream hs(next_line(is));
    std::vector<std::uint64_t> h(3);
    if (!(hs >> h[0] >> h[1] >> h[2])) throw UsageError("fixture: bad header");
    return h;
}

// Codeword spanned by the chosen basis shifts x^j * g.
class DualCode {
public:
    DualCode(std::uint64_t p, const Gf2Poly& generator, std::size_t dim) : p_(p) {
        for (std::size_t j = 0; j < dim; ++j) {
            Gf2Poly b = generator.shifted_up(j);
            std::vector<std::uint64_t> w(words(), 0);
            std::copy(b.words().begin(), b.words().end(), w.begin());
            basis_.push_back(std::move(w));
        }
    }
    std::size_t words() const { return static_cast<std::size_t>((p_ + 63) / 64); }
    std::size_t dim() const { return basis_.size(); }
    void toggle(std::vector<std::uint64_t>& c, std::size_t j) const {
        for (std::size_t i = 0; i < c.size(); ++i) c[i] ^= basis_[j][i];
    }
    static std::uint64_t weight(const std::vector<std::uint64_t>& c) {
        std::uint64_t w = 0;
        for (auto x : c) w += static_cast<std::uint64_t>(std::popcount(x));
        return w;
    }
    static ResidueSet support(const std::vector<std::uint64_t>& c) { return Gf2Poly(c).support(); }

private:
    std::uint64_t p_;
    std::vector<std::vector<std::uint64_t>> basis_;
};

} // namespace

ResidueSet subgroup_2(std::uint64_t p) {
    require_odd_prime(p, "subgroup_2");
    ResidueSet out;
    std::uint64_t x = 1;
    do {
        out.push_back(x);
        x = (2 * x) % p;
    } while (x != 1);
    std::sort(out.begin(), out.end());
    return out;
}

ResidueSet build_s1(const DependencyWitness& witness) {
    if (!verify_witness(witness)) throw UsageError("build_s1: witness does not verify");
    return normalized(witness.exponents, witness.p, "build_s1");
}

Gf2Poly phi(const ResidueSet& s) { return Gf2Poly::from_exponents(s); }

Gf2Poly compute_tau(std::uint64_t p, const ResidueSet& s1) {
    require_odd_prime(p, "compute_tau");
    const auto s = normalized(s1, p, "compute_tau");
    if (s.empty()) throw UsageError("compute_tau: S1 must be nonempty");
    const Gf2Poly f = phi(s);
    if (f.degree() < 1) return f.is_zero() ? Gf2Poly::one() : f;
    // Reduce x^p + 1 modulo phi first; phi has small degree.
    Gf2Poly xp = poly_powmod(Gf2Poly::x(), p, f);
    xp.flip_coeff(0);
    return poly_gcd(f, xp);
}

CheckResult verify_algebraic_niceness(std::uint64_t p, const ResidueSet& s0, const ResidueSet& s1) {
    auto fail = [](std::string why, std::optional<std::uint64_t> a = {}, std::optional<std::uint64_t> b = {}) {
        return CheckResult{Violation{std::move(why), a, b}};
    };
    if (p < 3 || p % 2 == 0 || !is_prime(p)) return fail("p is not an odd prime");
    if (s0.empty()) return fail("S0 is empty");
    if (s1.size() % 2 == 0) return fail("|S1| is even");
    std::vector<char> in_s0(p, 0), seen(p, 0);
    for (auto x : s0) {
        if (x >= p) return fail("S0 residue out of range");
        in_s0[x] = 1;
    }
    for (auto x : s1) {
        if (x >= p || seen[x]) return fail("S1 is not a set of residues");
        seen[x] = 1;
    }
    for (auto beta : subgroup_2(p)) {
        for (std::uint64_t alpha = 0; alpha < p; ++alpha) {
            unsigned parity = 0;
            for (auto s : s1) parity ^= static_cast<unsigned>(in_s0[(alpha + mulmod64(beta, s, p)) % p]);
            if (parity) return fail("odd intersection", alpha, beta);
        }
    }
    return {};
}

ResidueSet build_s0(std::uint64_t p, const ResidueSet& s1, const BuildS0Options& opts) {
    const Gf2Poly tau = compute_tau(p, s1);
    if (tau.degree() < 1) throw UsageError("build_s0: tau is constant, S1 is not usable");
    Gf2Poly xp1 = Gf2Poly::monomial(p);
    xp1.flip_coeff(0);
    const Gf2Poly h = poly_divmod(xp1, tau).quotient;
    const DualCode code(p, poly_reciprocal(h), static_cast<std::size_t>(tau.degree()));
    const std::uint64_t target = (p + 1) / 2;
    const auto s1n = normalized(s1, p, "build_s0");

    auto accept = [&](const std::vector<std::uint64_t>& c) -> std::optional<ResidueSet> {
        if (DualCode::weight(c) < target) return std::nullopt;
        auto s0 = DualCode::support(c);
        if (!verify_algebraic_niceness(p, s0, s1n)) return std::nullopt;
        return s0;
    };

    if (code.dim() <= opts.exhaustive_dim) {
        std::vector<std::uint64_t> c(code.words(), 0), best;
        std::uint64_t best_w = 0;
        const std::uint64_t total = std::uint64_t{1} << code.dim();
        for (std::uint64_t step = 1; step < total; ++step) {
            code.toggle(c, static_cast<std::size_t>(std::countr_zero(step)));
            const auto w = DualCode::weight(c);
            if (w > best_w) {
                best_w = w;
                best = c;
            }
        }
        if (auto s0 = accept(best)) return *s0;
        throw SearchExhaustedError("build_s0: no dual codeword of weight >= ceil(p/2) passed verification");
    }

    Rng rng = make_rng(opts.seed, p);
    std::vector<std::uint64_t> c(code.words(), 0);
    for (std::uint64_t attempt = 0; attempt < opts.random_tries; ++attempt) {
        std::fill(c.begin(), c.end(), 0);
        for (std::size_t j = 0; j < code.dim(); ++j) {
            if (rng() & 1u) code.toggle(c, j);
        }
        if (DualCode::weight(c) == 0) continue;
        // Greedy single-generator flips while the weight improves.
        for (bool improved = true; improved && DualCode::weight(c) < target;) {
            improved = false;
            const auto base = DualCode::weight(c);
            for (std::size_t j = 0; j < code.dim(); ++j) {
                code.toggle(c, j);
                if (DualCode::weight(c) > base) {
                    improved = true;
                    break;
                }
                code.toggle(c, j);
            }
        }
        if (auto s0 = accept(c)) return *s0;
    }
    throw SearchExhaustedError("build_s0: randomized search budget exhausted for p = " + std::to_string(p));
}

AlgebraicNicePair AlgebraicNicePair::make(std::uint64_t p, ResidueSet s1, ResidueSet s0) {
    AlgebraicNicePair pair;
    pair.p = p;
    pair.s1 = normalized(std::move(s1), p, "AlgebraicNicePair");
    pair.s0 = normalized(std::move(s0), p, "AlgebraicNicePair");
    pair.tau = compute_tau(p, pair.s1);
    if (pair.tau.degree() < 1) throw UsageError("AlgebraicNicePair: tau is constant");
    if (auto check = verify_algebraic_niceness(p, pair.s0, pair.s1); !check) {
        throw UsageError("AlgebraicNicePair: " + check.violation->reason);
    }
    return pair;
}

void AlgebraicNicePair::write(std::ostream& os) const {
    os << p << ' ' << s1.size() << ' ' << s0.size() << '\n' << join(s1) << '\n' << join(s0) << '\n';
}

AlgebraicNicePair AlgebraicNicePair::read(std::istream& is) {
    const auto h = parse_header(is);
    auto s1 = parse_list(next_line(is));
    auto s0 = parse_list(next_line(is));
    if (s1.size() != h[1] || s0.size() != h[2]) throw UsageError("fixture: set sizes do not match the header");
    return make(h[0], std::move(s1), std::move(s0));
}

AlgebraicNicePair build_nice_pair(std::uint64_t p, std::uint64_t seed, const BuildS0Options& opts) {
    const auto witness = extract_witness_3(p, seed);
    auto s1 = build_s1(witness);
    BuildS0Options o = opts;
    o.seed = seed;
    auto s0 = build_s0(p, s1, o);
    return AlgebraicNicePair::make(p, std::move(s1), std::move(s0));
}

void MatchingFamily::write(std::ostream& os) const {
    os << p << ' ' << m << ' ' << n() << '\n';
    for (const auto& x : u) os << join(x) << '\n';
    for (const auto& x : v) os << join(x) << '\n';
    os << join(s) << '\n';
}

MatchingFamily MatchingFamily::read(std::istream& is) {
    const auto h = parse_header(is);
    MatchingFamily fam;
    fam.p = h[0];
    fam.m = static_cast<std::size_t>(h[1]);
    for (std::uint64_t i = 0; i < h[2]; ++i) fam.u.push_back(parse_list(next_line(is)));
    for (std::uint64_t i = 0; i < h[2]; ++i) fam.v.push_back(parse_list(next_line(is)));
    fam.s = normalized(parse_list(next_line(is)), fam.p, "MatchingFamily");
    for (const auto* side : {&fam.u, &fam.v}) {
        for (const auto& x : *side) {
            if (x.size() != fam.m) throw UsageError("fixture: vector length does not match m");
            for (auto r : x) {
                if (r >= fam.p) throw UsageError("fixture: residue out of range");
            }
        }
    }
    return fam;
}

std::uint64_t dot(const ZpVector& a, const ZpVector& b, std::uint64_t p) {
    if (a.size() != b.size()) throw UsageError("dot: length mismatch");
    u128 acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += static_cast<u128>(a[i]) * b[i];
        if (acc >> 120) acc %= p;
    }
    return static_cast<std::uint64_t>(acc % p);
}

MatchingFamily trivial_family(std::uint64_t p, std::size_t m) {
    require_odd_prime(p, "trivial_family");
    if (m < 2) throw UsageError("trivial_family: m must be >= 2");
    MatchingFamily fam;
    fam.p = p;
    fam.m = m;
    fam.s = subgroup_2(p);
    for (std::size_t i = 0; i < m; ++i) {
        ZpVector u(m, 0), v(m, 1);
        u[i] = 1;
        v[i] = 0;
        fam.u.push_back(std::move(u));
        fam.v.push_back(std::move(v));
    }
    return fam;
}

MatchingFamily incidence_family(std::uint64_t p, std::size_t m_prime, std::size_t max_pairs) {
    require_odd_prime(p, "incidence_family");
    const std::size_t r = static_cast<std::size_t>(p - 1);
    if (m_prime < r) throw UsageError("incidence_family: m' must be >= p - 1");
    double count = 1;
    for (std::size_t i = 0; i < r; ++i) count = count * static_cast<double>(m_prime - i) / static_cast<double>(i + 1);
    if (count > static_cast<double>(max_pairs)) throw ResourceLimitError("incidence_family: too many subsets");
    MatchingFamily fam;
    fam.p = p;
    fam.m = m_prime;
    for (std::uint64_t z = 1; z < p; ++z) fam.s.push_back(z);
    std::vector<std::size_t> idx(r);
    for (std::size_t i = 0; i < r; ++i) idx[i] = i;
    for (;;) {
        ZpVector u(m_prime, 0), v(m_prime, 1);
        for (auto i : idx) {
            u[i] = 1;
            v[i] = 0;
        }
        fam.u.push_back(std::move(u));
        fam.v.push_back(std::move(v));
        std::size_t i = r;
        while (i > 0 && idx[i - 1] == m_prime - r + i - 1) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
    }
    return fam;
}

ZpVector tensor(const ZpVector& a, const ZpVector& b, std::uint64_t p) {
    ZpVector out;
    out.reserve(a.size() * b.size());
    for (auto x : a) {
        for (auto y : b) out.push_back(mulmod64(x, y, p));
    }
    return out;
}

MatchingFamily tensor_power_family(const MatchingFamily& fam, unsigned w, std::size_t max_length) {
    if (w < 1) throw UsageError("tensor_power_family: w must be >= 1");
    double len = 1;
    for (unsigned i = 0; i < w; ++i) len *= static_cast<double>(fam.m);
    if (len > static_cast<double>(max_length)) throw ResourceLimitError("tensor_power_family: m^w exceeds the cap");
    auto power = [&](const ZpVector& x) {
        ZpVector out = x;
        for (unsigned i = 1; i < w; ++i) out = tensor(out, x, fam.p);
        return out;
    };
    MatchingFamily out;
    out.p = fam.p;
    out.m = static_cast<std::size_t>(len);
    for (const auto& x : fam.u) out.u.push_back(power(x));
    for (const auto& x : fam.v) out.v.push_back(power(x));
    for (auto z : fam.s) out.s.push_back(powmod64(z, w, fam.p));
    std::sort(out.s.begin(), out.s.end());
    out.s.erase(std::unique(out.s.begin(), out.s.end()), out.s.end());
    return out;
}

CheckResult verify_matching(const MatchingFamily& fam) {
    auto fail = [](std::string why, std::optional<std::uint64_t> i = {}, std::optional<std::uint64_t> j = {}) {
        return CheckResult{Violation{std::move(why), i, j}};
    };
    if (fam.u.size() != fam.v.size()) return fail("u and v differ in count");
    std::vector<char> allowed(fam.p, 0);
    for (auto z : fam.s) {
        if (z == 0 || z >= fam.p) return fail("S must lie in Z_p^*");
        allowed[z] = 1;
    }
    for (std::size_t i = 0; i < fam.n(); ++i) {
        if (fam.u[i].size() != fam.m || fam.v[i].size() != fam.m) return fail("vector length differs from m", i);
    }
    for (std::size_t i = 0; i < fam.n(); ++i) {
        for (std::size_t j = 0; j < fam.n(); ++j) {
            const auto d = dot(fam.u[j], fam.v[i], fam.p);
            if (i == j && d != 0) return fail("(u_i, v_i) != 0", i, j);
            if (i != j && !allowed[d]) return fail("(u_j, v_i) not in S", i, j);
        }
    }
    return {};
}

std::uint64_t ZpPolynomial::evaluate(const std::vector<std::uint64_t>& xs) const {
    if (xs.size() != vars) throw UsageError("ZpPolynomial: wrong number of arguments");
    std::uint64_t acc = 0;
    for (const auto& term : terms) {
        std::uint64_t prod = term.coeff % p;
        for (std::size_t j = 0; j < vars; ++j) prod = mulmod64(prod, powmod64(xs[j] % p, term.exponents[j], p), p);
        acc = (acc + prod) % p;
    }
    return acc;
}

ZpPolynomial ZpPolynomial::bar() const {
    ZpPolynomial out = *this;
    for (auto& term : out.terms) term.coeff = 1;
    return out;
}

ZpVector poly_vector(const ZpPolynomial& f, const std::vector<ZpVector>& us) {
    if (us.size() != f.vars) throw UsageError("poly_vector: wrong number of vectors");
    ZpVector out;
    for (const auto& term : f.terms) {
        if (term.exponents.size() != f.vars) throw UsageError("poly_vector: monomial arity mismatch");
        ZpVector block{term.coeff % f.p};
        for (std::size_t j = 0; j < f.vars; ++j) {
            for (unsigned e = 0; e < term.exponents[j]; ++e) block = tensor(block, us[j], f.p);
        }
        out.insert(out.end(), block.begin(), block.end());
    }
    return out;
}

bool check_poly_dot_claim(const ZpPolynomial& f, const std::vector<ZpVector>& us, const std::vector<ZpVector>& vs) {
    return check_poly_dot_claim(f, f.bar(), us, vs);
}

bool check_poly_dot_claim(const ZpPolynomial& f, const ZpPolynomial& rhs, const std::vector<ZpVector>& us,
                          const std::vector<ZpVector>& vs) {
    if (us.size() != f.vars || vs.size() != f.vars) throw UsageError("check_poly_dot_claim: arity mismatch");
    const auto left = poly_vector(f, us);
    const auto right = poly_vector(rhs, vs);
    if (left.size() != right.size()) return false;
    std::vector<std::uint64_t> dots;
    for (std::size_t j = 0; j < f.vars; ++j) dots.push_back(dot(us[j], vs[j], f.p));
    return dot(left, right, f.p) == f.evaluate(dots);
}

} // namespace niceldc
