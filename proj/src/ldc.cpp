#include "niceldc/ldc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "niceldc/errors.hpp"
#include "niceldc/number_theory.hpp"
#include "niceldc/rng.hpp"

namespace niceldc {

namespace {

// Walks Z_p^m in index order while keeping (u_j, w) mod p current for a set of
// vectors: changing coordinate c by +1, or wrapping it from p-1 to 0, both add
// u_j[c] modulo p.
class DotOdometer {
public:
    DotOdometer(std::uint64_t p, std::size_t m, std::vector<const ZpVector*> us)
        : p_(p), w_(m, 0), us_(std::move(us)), dots_(us_.size(), 0) {}

    const ZpVector& point() const noexcept { return w_; }
    std::uint64_t dot(std::size_t j) const noexcept { return dots_[j]; }

    void advance() noexcept {
        for (std::size_t c = 0; c < w_.size(); ++c) {
            for (std::size_t j = 0; j < us_.size(); ++j) {
                dots_[j] += (*us_[j])[c];
                if (dots_[j] >= p_) dots_[j] -= p_;
            }
            if (++w_[c] < p_) return;
            w_[c] = 0;
        }
    }

private:
    std::uint64_t p_;
    ZpVector w_;
    std::vector<const ZpVector*> us_;
    std::vector<std::uint64_t> dots_;
};

std::vector<char> membership(std::uint64_t p, const ResidueSet& s) {
    std::vector<char> in(p, 0);
    for (auto x : s) in[x] = 1;
    return in;
}

void check_index(const LdcParams& params, std::size_t i) {
    if (i >= params.n()) throw UsageError("message index out of range");
}

} // namespace

std::uint64_t BitArray::weight() const noexcept {
    std::uint64_t w = 0;
    for (auto x : words_) w += static_cast<std::uint64_t>(std::popcount(x));
    return w;
}

BitArray& BitArray::operator^=(const BitArray& rhs) {
    if (size_ != rhs.size_) throw UsageError("BitArray: size mismatch");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= rhs.words_[i];
    return *this;
}

LdcParams LdcParams::make(MatchingFamily family, AlgebraicNicePair nice, std::uint64_t max_length) {
    if (family.p != nice.p) throw UsageError("LdcParams: family and nice pair use different p");
    if (family.n() == 0) throw UsageError("LdcParams: empty family");
    MatchingFamily against = family;
    against.s = subgroup_2(family.p);
    if (auto check = verify_matching(against); !check) {
        throw UsageError("LdcParams: family is not <2>-matching: " + check.violation->reason);
    }
    if (auto check = verify_algebraic_niceness(nice.p, nice.s0, nice.s1); !check) {
        throw UsageError("LdcParams: nice pair fails verification: " + check.violation->reason);
    }
    for (const auto& u : family.u) {
        if (std::all_of(u.begin(), u.end(), [](auto x) { return x == 0; })) {
            throw UsageError("LdcParams: u_i = 0 makes (u_i, w) constant");
        }
    }
    double len = 1;
    for (std::size_t c = 0; c < family.m; ++c) len *= static_cast<double>(family.p);
    if (len > static_cast<double>(max_length)) throw ResourceLimitError("LdcParams: p^m exceeds the length cap");
    LdcParams params;
    params.p = family.p;
    params.m = family.m;
    params.length = static_cast<std::uint64_t>(len);
    params.family = std::move(family);
    params.nice = std::move(nice);
    return params;
}

std::uint64_t point_to_index(const ZpVector& w, std::uint64_t p) {
    std::uint64_t idx = 0;
    for (std::size_t c = w.size(); c-- > 0;) idx = idx * p + w[c];
    return idx;
}

ZpVector index_to_point(std::uint64_t index, std::uint64_t p, std::size_t m) {
    ZpVector w(m);
    for (std::size_t c = 0; c < m; ++c) {
        w[c] = index % p;
        index /= p;
    }
    return w;
}

BitArray encode(const LdcParams& params, const Message& x) {
    if (x.size() != params.n()) throw UsageError("encode: message length must equal n");
    std::vector<const ZpVector*> active;
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (x[j]) active.push_back(&params.family.u[j]);
    }
    BitArray out(params.length);
    if (active.empty()) return out;
    const auto in_s0 = membership(params.p, params.nice.s0);
    DotOdometer odo(params.p, params.m, active);
    for (std::uint64_t idx = 0; idx < params.length; ++idx) {
        bool bit = false;
        for (std::size_t j = 0; j < active.size(); ++j) bit ^= static_cast<bool>(in_s0[odo.dot(j)]);
        if (bit) out.set(idx, true);
        odo.advance();
    }
    return out;
}

DecodeTrace decode_at(const LdcParams& params, const BitArray& y, std::size_t i, const ZpVector& w) {
    check_index(params, i);
    if (w.size() != params.m || y.size() != params.length) throw UsageError("decode: shape mismatch");
    const auto& u = params.family.u[i];
    const auto& v = params.family.v[i];
    const auto d = dot(u, w, params.p);
    if (!std::binary_search(params.nice.s0.begin(), params.nice.s0.end(), d)) {
        throw UsageError("decode: (u_i, w) is not in S0");
    }
    DecodeTrace tr;
    tr.w = w;
    ZpVector q(params.m);
    for (auto lambda : params.nice.s1) {
        for (std::size_t c = 0; c < params.m; ++c) q[c] = (w[c] + mulmod64(lambda, v[c], params.p)) % params.p;
        const auto pos = point_to_index(q, params.p);
        tr.positions.push_back(pos);
        tr.bit ^= y.get(pos);
    }
    return tr;
}

DecodeTrace decode_bit(const LdcParams& params, const BitArray& y, std::size_t i, std::uint64_t seed) {
    check_index(params, i);
    Rng rng(seed);
    std::uniform_int_distribution<std::uint64_t> coord(0, params.p - 1);
    const auto in_s0 = membership(params.p, params.nice.s0);
    ZpVector w(params.m);
    for (;;) {
        for (auto& c : w) c = coord(rng);
        if (in_s0[dot(params.family.u[i], w, params.p)]) return decode_at(params, y, i, w);
    }
}

std::uint64_t flip_count(std::uint64_t length, double delta) {
    if (!(delta >= 0.0 && delta <= 1.0)) throw UsageError("corrupt: delta must lie in [0, 1]");
    return std::min<std::uint64_t>(length, static_cast<std::uint64_t>(std::floor(delta * static_cast<double>(length) + 1e-9)));
}

BitArray corrupt(const LdcParams& params, const BitArray& y, double delta, CorruptionMode mode, std::uint64_t seed,
                 std::size_t target) {
    const std::uint64_t flips = flip_count(y.size(), delta);
    BitArray out = y;
    if (flips == 0) return out;
    if (mode == CorruptionMode::random) {
        // Rejection on a mark array; for more than half the positions, pick the
        // ones left alone instead.
        Rng rng(seed);
        std::uniform_int_distribution<std::uint64_t> pos(0, y.size() - 1);
        const bool complement = 2 * flips > y.size();
        const std::uint64_t picks = complement ? y.size() - flips : flips;
        BitArray marked(y.size());
        for (std::uint64_t got = 0; got < picks;) {
            const auto at = pos(rng);
            if (marked.get(at)) continue;
            marked.set(at, true);
            ++got;
        }
        for (std::uint64_t at = 0; at < y.size(); ++at) {
            if (marked.get(at) != complement) out.flip(at);
        }
        return out;
    }
    const auto stats = smoothness_stats(params, target);
    std::vector<std::uint64_t> order(y.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](auto a, auto b) { return stats.histogram[a] > stats.histogram[b]; });
    for (std::uint64_t f = 0; f < flips; ++f) out.flip(order[f]);
    return out;
}

SimulationReport simulate(const LdcParams& params, double delta, std::uint64_t trials, std::uint64_t seed,
                          CorruptionMode mode) {
    if (trials < 1) throw UsageError("simulate: trials must be >= 1");
    SimulationReport rep;
    rep.delta = delta;
    rep.trials = trials;
    rep.bound = 2.0 * static_cast<double>(params.k()) * delta;
    rep.vacuous = rep.bound >= 1.0;
    // Basis codewords once; each trial's codeword is an XOR by linearity.
    std::vector<BitArray> basis;
    for (std::size_t j = 0; j < params.n(); ++j) {
        Message e(params.n(), 0);
        e[j] = 1;
        basis.push_back(encode(params, e));
    }
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        Rng rng = make_rng(seed, trial);
        Message x(params.n());
        BitArray y(params.length);
        for (std::size_t j = 0; j < params.n(); ++j) {
            x[j] = static_cast<std::uint8_t>(rng() & 1u);
            if (x[j]) y ^= basis[j];
        }
        const auto i = static_cast<std::size_t>(rng() % params.n());
        const BitArray z = corrupt(params, y, delta, mode, rng(), i);
        if (decode_bit(params, z, i, rng()).bit != static_cast<bool>(x[i])) ++rep.errors;
    }
    rep.rate = static_cast<double>(rep.errors) / static_cast<double>(trials);
    if (!rep.vacuous) {
        rep.slack = 4.0 * std::sqrt(rep.bound * (1.0 - rep.bound) / static_cast<double>(trials));
        rep.violated = rep.rate > rep.bound + rep.slack;
    }
    return rep;
}

void write_simulation_csv(std::ostream& os, const std::vector<SimulationReport>& rows) {
    os << "delta,trials,errors,rate,bound,violated\n";
    char buf[160];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%g,%llu,%llu,%.6f,%.6f,%s\n", r.delta, static_cast<unsigned long long>(r.trials),
                      static_cast<unsigned long long>(r.errors), r.rate, r.bound, r.violated ? "true" : "false");
        os << buf;
    }
}

SmoothnessStats smoothness_stats(const LdcParams& params, std::size_t i) {
    check_index(params, i);
    SmoothnessStats st;
    st.index = i;
    st.histogram.assign(params.length, 0);
    const auto in_s0 = membership(params.p, params.nice.s0);
    const auto& v = params.family.v[i];
    // Index offsets of lambda * v_i, added digit-wise with carries mod p.
    std::vector<ZpVector> shifts;
    for (auto lambda : params.nice.s1) {
        ZpVector s(params.m);
        for (std::size_t c = 0; c < params.m; ++c) s[c] = mulmod64(lambda, v[c], params.p);
        shifts.push_back(std::move(s));
    }
    std::vector<char> in_t(params.length, 0);
    DotOdometer odo(params.p, params.m, {&params.family.u[i]});
    ZpVector q(params.m);
    for (std::uint64_t idx = 0; idx < params.length; ++idx) {
        if (in_s0[odo.dot(0)]) {
            in_t[idx] = 1;
            ++st.t_size;
            ++st.valid_w;
            const auto& w = odo.point();
            for (const auto& s : shifts) {
                for (std::size_t c = 0; c < params.m; ++c) {
                    q[c] = w[c] + s[c];
                    if (q[c] >= params.p) q[c] -= params.p;
                }
                ++st.histogram[point_to_index(q, params.p)];
            }
        }
        odo.advance();
    }
    st.flat = true;
    bool first = true;
    for (std::uint64_t idx = 0; idx < params.length; ++idx) {
        if (!in_t[idx]) {
            st.outside_hits += st.histogram[idx];
            continue;
        }
        if (first) {
            st.per_position = st.histogram[idx];
            first = false;
        } else if (st.histogram[idx] != st.per_position) {
            st.flat = false;
        }
    }
    if (st.outside_hits) st.flat = false;
    return st;
}

void write_codeword(std::ostream& os, const LdcParams& params, const BitArray& y) {
    if (y.size() != params.length) throw UsageError("write_codeword: length mismatch");
    os << params.p << ' ' << params.m << ' ' << params.n() << ' ' << params.nice.s0.size() << ' '
       << params.nice.s1.size() << '\n';
    const std::uint64_t bytes = (y.size() + 7) / 8;
    for (std::uint64_t b = 0; b < bytes; ++b) {
        const auto byte = static_cast<char>((y.words()[b / 8] >> (8 * (b % 8))) & 0xFFu);
        os.put(byte);
    }
    if (!os) throw std::runtime_error("write_codeword: write failed");
}

BitArray read_codeword(std::istream& is, CodewordHeader* header) {
    std::string line;
    if (!std::getline(is, line)) throw UsageError("read_codeword: missing header");
    std::istringstream hs(line);
    CodewordHeader h;
    if (!(hs >> h.p >> h.m >> h.n >> h.s0 >> h.s1)) throw UsageError("read_codeword: bad header");
    double len = 1;
    for (std::uint64_t c = 0; c < h.m; ++c) len *= static_cast<double>(h.p);
    if (len > static_cast<double>(1ULL << 40)) throw ResourceLimitError("read_codeword: length too large");
    BitArray y(static_cast<std::uint64_t>(len));
    const std::uint64_t bytes = (y.size() + 7) / 8;
    for (std::uint64_t b = 0; b < bytes; ++b) {
        const int c = is.get();
        if (c == std::char_traits<char>::eof()) throw UsageError("read_codeword: truncated payload");
        y.words()[b / 8] |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * (b % 8));
    }
    if (y.size() % 64) y.words().back() &= (std::uint64_t{1} << (y.size() % 64)) - 1;
    if (header) *header = h;
    return y;
}

} // namespace niceldc
