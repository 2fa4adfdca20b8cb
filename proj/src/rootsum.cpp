#include "niceldc/rootsum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "field_engine.hpp"
#include "niceldc/errors.hpp"
#include "niceldc/number_theory.hpp"

namespace niceldc {

namespace {

void require_odd_prime(std::uint64_t p, const char* who) {
    if (p < 3 || p % 2 == 0 || !is_prime(p)) throw UsageError(std::string(who) + ": p must be an odd prime");
}

void require_odd_k(unsigned k, unsigned min, const char* who) {
    if (k < min || k % 2 == 0) {
        throw UsageError(std::string(who) + ": k must be odd and >= " + std::to_string(min));
    }
}

BigInt pow_big(std::uint64_t base, unsigned e) { return boost::multiprecision::pow(BigInt(base), e); }

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            if (!cur.empty() || sep != ' ') out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty() || sep != ' ') out.push_back(cur);
    return out;
}

std::uint64_t parse_u64(const std::string& s) {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used);
    if (used != s.size()) throw UsageError("witness text: bad integer '" + s + "'");
    return v;
}

struct Setup {
    std::uint64_t t;
    FieldHandle field;
    Gf2Poly generator;
};

Setup setup(std::uint64_t p, std::uint64_t seed) {
    const std::uint64_t t = ord2(p);
    if (t > 4096 * 64) throw ResourceLimitError("ord2(p) too large for field construction");
    auto field = build_field(static_cast<unsigned>(t), seed);
    auto g = cp_generator(field, p, seed).value();
    return {t, std::move(field), std::move(g)};
}

template <typename Fn>
decltype(auto) with_engine(const BinaryField& field, Fn&& fn) {
    if (field.degree() <= 32) {
        const detail::SmallEngine eng{SmallField(field)};
        return fn(eng);
    }
    const detail::BigEngine eng{field};
    return fn(eng);
}

template <typename E>
typename E::Elem to_elem(const E&, const Gf2Poly& v) {
    if constexpr (std::is_same_v<typename E::Elem, Gf2Poly>) {
        return v;
    } else {
        return v.word(0);
    }
}

template <typename E>
Gf2Poly to_poly(const typename E::Elem& v) {
    if constexpr (std::is_same_v<typename E::Elem, Gf2Poly>) {
        return v;
    } else {
        return Gf2Poly::from_uint(v);
    }
}

} // namespace

std::string DependencyWitness::to_text() const {
    std::ostringstream os;
    os << p << ' ' << t << ' ' << exponents.size() << ' ' << modulus.to_hex() << ' ' << generator.to_hex() << ' ';
    for (std::size_t i = 0; i < exponents.size(); ++i) os << (i ? "," : "") << exponents[i];
    return os.str();
}

DependencyWitness DependencyWitness::from_text(std::string_view line) {
    const auto tok = split(line, ' ');
    if (tok.size() != 6) throw UsageError("witness text: expected 6 fields");
    DependencyWitness w;
    w.p = parse_u64(tok[0]);
    w.t = parse_u64(tok[1]);
    const auto k = parse_u64(tok[2]);
    w.modulus = Gf2Poly::from_hex(tok[3]);
    w.generator = Gf2Poly::from_hex(tok[4]);
    for (const auto& e : split(tok[5], ',')) w.exponents.push_back(parse_u64(e));
    if (w.exponents.size() != k) throw UsageError("witness text: exponent count does not match k'");
    return w;
}

bool verify_witness(const DependencyWitness& w) {
    if (w.p < 3 || w.p % 2 == 0 || !is_prime(w.p)) return false;
    if (w.t != ord2(w.p) || w.modulus.degree() != static_cast<std::int64_t>(w.t)) return false;
    if (w.exponents.size() % 2 == 0) return false;
    auto sorted = w.exponents;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
    if (!sorted.empty() && sorted.back() >= w.p) return false;
    if (!is_irreducible(w.modulus)) return false;
    const BinaryField field(w.modulus);
    if (w.generator.is_zero() || w.generator.degree() >= static_cast<std::int64_t>(w.t)) return false;
    if (w.generator.is_one() || !field.pow(w.generator, w.p).is_one()) return false;
    Gf2Poly sum;
    for (auto e : w.exponents) sum += field.pow(w.generator, e);
    return sum.is_zero();
}

bool necessary_cond_3(std::uint64_t p, std::uint64_t t) { return 3 * BigInt(t) * t <= 4 * BigInt(p); }

bool necessary_cond_k(std::uint64_t p, std::uint64_t t, unsigned k) {
    require_odd_k(k, 3, "necessary_cond_k");
    return pow_big(t, k - 1) <= pow_big(2, k - 1) * pow_big(p, k - 2);
}

bool sufficient_cond_3(std::uint64_t p, std::uint64_t t) {
    if (3 * BigInt(t) >= 256) return false; // p^4 < 2^256
    return pow_big(2, static_cast<unsigned>(3 * t)) < pow_big(p, 4);
}

bool odd_t_filter(std::uint64_t p, std::uint64_t t) { return p <= 3 || t % 2 == 1; }

bool gcd_test_3(std::uint64_t p) {
    if (p < 3 || p % 2 == 0) throw UsageError("gcd_test_3: p must be odd and >= 3");
    Gf2Poly a = Gf2Poly::monomial(p);
    a.flip_coeff(0);
    // (x+1)^p: the coefficient of x^i is C(p, i) mod 2 = [i & p == i] (Lucas).
    std::vector<std::uint64_t> words(p / 64 + 1, 0);
    for (std::uint64_t i = p;; i = (i - 1) & p) {
        words[i / 64] |= std::uint64_t{1} << (i % 64);
        if (i == 0) break;
    }
    Gf2Poly b(std::move(words));
    b.flip_coeff(0);
    return poly_gcd(std::move(a), std::move(b)).degree() >= 1;
}

ClassTestResult class_test_3(std::uint64_t p, std::uint64_t seed) {
    require_odd_prime(p, "class_test_3");
    auto s = setup(p, seed);
    ClassTestResult result{s.field, s.generator, std::nullopt, 0};
    with_engine(*s.field, [&](const auto& eng) {
        const auto g = to_elem(eng, s.generator);
        result.classes_tested = detail::scan_classes(eng, g, p, [&](std::uint64_t i, const auto&, bool hit) {
            if (hit) result.exponent = i;
            return !hit;
        });
        return 0;
    });
    return result;
}

DependencyWitness extract_witness_3(std::uint64_t p, std::uint64_t seed) {
    require_odd_prime(p, "extract_witness_3");
    auto s = setup(p, seed);
    DependencyWitness w;
    w.p = p;
    w.t = s.t;
    w.modulus = s.field->modulus();
    with_engine(*s.field, [&](const auto& eng) {
        using E = std::decay_t<decltype(eng)>;
        const auto g = to_elem(eng, s.generator);
        const auto root = static_cast<std::uint64_t>(std::ceil(std::sqrt(static_cast<double>(p))));
        const std::uint64_t baby = std::is_same_v<E, detail::SmallEngine> ? std::max<std::uint64_t>(root, 1u << 16) : root;
        std::optional<detail::DlogTable<E>> dlog;
        std::uint64_t best_d = 0;
        typename E::Elem best_zeta{};
        detail::scan_classes(eng, g, p, [&](std::uint64_t i, const typename E::Elem& zeta, bool hit) {
            if (!hit) return true;
            if (!dlog) dlog.emplace(eng, g, p, baby);
            const auto j = (*dlog)(E::plus_one(zeta));
            if (!j) throw std::logic_error("extract_witness_3: zeta + 1 outside <g>");
            // zeta + 1 = g^j = zeta^d with d = j / i; zeta^-1 gives 1 - d.
            const std::uint64_t d = mulmod64(*j, powmod64(i, p - 2, p), p);
            const std::uint64_t d_inv = (p + 1 - d) % p;
            if (best_d == 0 || d < best_d) {
                best_d = d;
                best_zeta = zeta;
            }
            if (d_inv < best_d) {
                best_d = d_inv;
                best_zeta = eng.pow(zeta, p - 1);
            }
            return true;
        });
        if (best_d == 0) throw NotFoundError("no three p-th roots of unity sum to zero for p = " + std::to_string(p));
        w.generator = to_poly<E>(best_zeta);
        w.exponents = {0, 1, best_d};
        return 0;
    });
    std::sort(w.exponents.begin(), w.exponents.end());
    return w;
}

BruteForceResult brute_force_deps(std::uint64_t p, unsigned k, const BruteForceLimits& limits, std::uint64_t seed) {
    require_odd_prime(p, "brute_force_deps");
    require_odd_k(k, 1, "brute_force_deps");
    const std::uint64_t t = ord2(p);
    if (t > limits.t_limit || t > 30) {
        throw ResourceLimitError("brute_force_deps: t = " + std::to_string(t) + " exceeds the limit");
    }
    if (static_cast<double>(k) * std::log2(static_cast<double>(p)) >= 126.0) {
        throw ResourceLimitError("brute_force_deps: tuple counts would overflow 128 bits");
    }
    auto s = setup(p, seed);
    const SmallField sf(*s.field);
    const std::uint64_t size = sf.size();
    const std::uint64_t g = s.generator.word(0);

    BruteForceResult r;
    r.p = p;
    r.t = t;
    r.k = k;
    r.modulus = s.field->modulus();
    r.generator = s.generator;

    std::vector<std::uint64_t> elem(p);
    std::vector<std::int64_t> index(size, -1);
    std::uint64_t cur = 1;
    for (std::uint64_t e = 0; e < p; ++e) {
        elem[e] = cur;
        index[cur] = static_cast<std::int64_t>(e);
        cur = sf.mul(cur, g);
    }

    if (k == 1) {
        r.distinct_count = 0;
        return r;
    }

    // Ordered count: M_k = sum_s N_j(s) N_{k-j}(s), N_i(s) = #ordered i-tuples summing to s.
    const unsigned lo = k / 2, hi = k - lo;
    const double work = static_cast<double>(p) * static_cast<double>(p) +
                        static_cast<double>(hi > 2 ? hi - 2 : 0) * static_cast<double>(size) * static_cast<double>(p);
    if (work > static_cast<double>(limits.max_work)) {
        throw ResourceLimitError("brute_force_deps: ordered count exceeds the work budget");
    }
    std::vector<u128> n1(size, 0), n2(size, 0);
    for (auto x : elem) n1[x] = 1;
    for (auto x : elem) {
        for (auto y : elem) n2[x ^ y] += 1;
    }
    auto step = [&](const std::vector<u128>& prev) {
        std::vector<u128> next(size, 0);
        for (std::uint64_t v = 0; v < size; ++v) {
            u128 acc = 0;
            for (auto c : elem) acc += prev[v ^ c];
            next[v] = acc;
        }
        return next;
    };
    std::vector<u128> n_lo = lo == 1 ? n1 : n2;
    std::vector<u128> n_hi = n2;
    for (unsigned i = 2; i < hi; ++i) n_hi = step(n_hi);
    for (unsigned i = 2; i < lo; ++i) n_lo = step(n_lo); // lo < hi, so only for k >= 7
    for (std::uint64_t v = 0; v < size; ++v) r.ordered_count += n_lo[v] * n_hi[v];

    // Distinct sets: e_1 < ... < e_{k-1} chosen, e_k forced by the sum.
    double combos = 1;
    for (unsigned i = 0; i < k - 1; ++i) combos = combos * static_cast<double>(p - i) / (i + 1);
    if (combos > static_cast<double>(limits.max_work)) return r;
    std::uint64_t distinct = 0;
    std::vector<std::uint64_t> chosen;
    auto rec = [&](auto&& self, std::uint64_t from, std::uint64_t acc) -> void {
        if (chosen.size() == k - 1) {
            const auto last = index[acc];
            if (last > static_cast<std::int64_t>(chosen.back())) {
                ++distinct;
                if (r.distinct_sets.size() < limits.max_listed) {
                    auto set = chosen;
                    set.push_back(static_cast<std::uint64_t>(last));
                    r.distinct_sets.push_back(std::move(set));
                } else {
                    r.listing_truncated = true;
                }
            }
            return;
        }
        for (std::uint64_t e = from; e < p; ++e) {
            chosen.push_back(e);
            self(self, e + 1, acc ^ elem[e]);
            chosen.pop_back();
        }
    };
    rec(rec, 0, 0);
    r.distinct_count = distinct;
    return r;
}

FourierProfile fourier_profile(std::uint64_t p, unsigned k_max, unsigned t_limit, std::uint64_t seed) {
    require_odd_prime(p, "fourier_profile");
    const std::uint64_t t = ord2(p);
    if (t > t_limit || t > 30) {
        throw ResourceLimitError("fourier_profile: t = " + std::to_string(t) + " exceeds the limit");
    }
    auto s = setup(p, seed);
    const SmallField sf(*s.field);
    const std::uint64_t size = sf.size();

    FourierProfile prof;
    prof.p = p;
    prof.t = t;
    prof.modulus = s.field->modulus();
    auto& f = prof.coefficients;
    f.assign(size, 0);
    std::uint64_t x = 1;
    const std::uint64_t g = s.generator.word(0);
    for (std::uint64_t e = 0; e < p; ++e) {
        f[sf.dual_coordinates(x)] = 1;
        x = sf.mul(x, g);
    }
    for (std::uint64_t h = 1; h < size; h <<= 1) {
        for (std::uint64_t i = 0; i < size; i += 2 * h) {
            for (std::uint64_t j = i; j < i + h; ++j) {
                const std::int32_t a = f[j], b = f[j + h];
                f[j] = a + b;
                f[j + h] = a - b;
            }
        }
    }
    for (std::uint64_t a = 0; a < size; ++a) {
        ++prof.histogram[f[a]];
        if (a) prof.max_nontrivial = std::max<std::uint64_t>(prof.max_nontrivial, static_cast<std::uint64_t>(std::abs(f[a])));
    }
    for (const auto& [v, c] : prof.histogram) prof.parseval_sum += BigInt(c) * v * v;
    for (unsigned k = 1; k <= k_max; k += 2) prof.m_counts[k] = fourier_moment(prof, k);
    return prof;
}

BigInt fourier_moment(const FourierProfile& profile, unsigned k) {
    BigInt sum = 0;
    for (const auto& [v, c] : profile.histogram) sum += BigInt(c) * boost::multiprecision::pow(BigInt(v), k);
    const BigInt denom = BigInt(1) << static_cast<unsigned>(profile.t);
    if (sum % denom != 0) throw std::logic_error("fourier_moment: sum is not divisible by 2^t");
    return sum / denom;
}

bool fourier_sufficient_k(const FourierProfile& profile, unsigned k) {
    require_odd_k(k, 3, "fourier_sufficient_k");
    const BigInt lhs = pow_big(profile.max_nontrivial, k - 2) << static_cast<unsigned>(profile.t);
    return lhs < pow_big(profile.p, k - 1);
}

unsigned min_k_dependency(std::uint64_t p, unsigned t_limit, std::uint64_t seed) {
    const auto prof = fourier_profile(p, 1, t_limit, seed);
    for (unsigned k = 3; k <= p; k += 2) {
        if (fourier_moment(prof, k) > 0) return k;
    }
    throw std::logic_error("min_k_dependency: the full set of roots must sum to zero");
}

} // namespace niceldc
