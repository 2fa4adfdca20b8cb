#include "niceldc/binary_field.hpp"

#include <cmath>
#include <unordered_map>

#include "niceldc/errors.hpp"
#include "niceldc/number_theory.hpp"

namespace niceldc {

namespace {

bool bit_at(std::span<const std::uint64_t> bits, std::size_t i) { return (bits[i / 64] >> (i % 64)) & 1u; }

} // namespace

BinaryField::BinaryField(Gf2Poly modulus)
    : degree_(modulus.degree() >= 1 ? static_cast<unsigned>(modulus.degree()) : 0),
      reducer_(modulus.degree() >= 1 ? modulus : Gf2Poly::x()) {
    if (modulus.degree() < 1 || !is_irreducible(modulus)) {
        throw UsageError("BinaryField: modulus must be irreducible of degree >= 1");
    }
}

std::span<const std::uint64_t> BinaryField::trace_powers() const {
    std::call_once(trace_once_, [this] {
        // Newton's identities in characteristic 2 with e_j = coeff of x^(t-j):
        //   s_k = sum_{j=1}^{min(k-1,t)} e_j s_{k-j} + (k <= t ? k e_k : 0).
        const std::size_t t = degree_;
        const std::size_t count = 2 * t - 1;
        const Gf2Poly& f = modulus();
        std::vector<std::uint64_t> s((count + 63) / 64, 0);
        auto set = [&](std::size_t i) { s[i / 64] |= std::uint64_t{1} << (i % 64); };
        if (t % 2) set(0);
        for (std::size_t k = 1; k < count; ++k) {
            bool v = false;
            const std::size_t jmax = std::min(k - 1, t);
            for (std::size_t j = 1; j <= jmax; ++j) {
                if (f.coeff(t - j) && bit_at(s, k - j)) v = !v;
            }
            if (k <= t && (k % 2) && f.coeff(t - k)) v = !v;
            if (v) set(k);
        }
        trace_powers_ = std::move(s);
    });
    return trace_powers_;
}

bool BinaryField::trace(const Gf2Poly& a) const {
    const auto tp = trace_powers();
    bool v = false;
    for (std::size_t i = 0; i < a.words().size(); ++i) {
        v ^= std::popcount(a.words()[i] & tp[i]) & 1;
    }
    // Bits at index >= t of trace_powers never meet a reduced element.
    return v;
}

Gf2Poly BinaryField::random_element(Rng& rng) const {
    std::vector<std::uint64_t> w((degree_ + 63) / 64);
    for (auto& x : w) x = rng();
    if (degree_ % 64) w.back() &= (std::uint64_t{1} << (degree_ % 64)) - 1;
    return Gf2Poly(std::move(w));
}

FieldHandle build_field(unsigned t, std::uint64_t seed) {
    if (t < 1) throw UsageError("build_field: t must be >= 1");
    if (t == 1) return std::make_shared<const BinaryField>(Gf2Poly::from_uint(3));
    Rng rng = make_rng(seed, t);
    for (;;) {
        std::vector<std::uint64_t> w(t / 64 + 1);
        for (auto& x : w) x = rng();
        if (t % 64) {
            w.back() &= (std::uint64_t{1} << (t % 64)) - 1;
        } else {
            w.back() = 0;
        }
        w[t / 64] |= std::uint64_t{1} << (t % 64);
        w[0] |= 1;
        Gf2Poly candidate(std::move(w));
        if (is_irreducible(candidate)) return std::make_shared<const BinaryField>(std::move(candidate));
    }
}

BfElem::BfElem(FieldHandle field, Gf2Poly value) : field_(std::move(field)), value_(field_->reduce(std::move(value))) {}

BfElem operator+(const BfElem& a, const BfElem& b) {
    Gf2Poly v = a.value_;
    v += b.value_;
    return {a.field_, std::move(v)};
}

BfElem operator*(const BfElem& a, const BfElem& b) { return {a.field_, a.field_->mul(a.value_, b.value_)}; }

bool trace(const BfElem& x) { return x.field()->trace(x.value()); }

std::vector<std::uint64_t> mersenne_cofactor(unsigned t, std::uint64_t p) {
    if (p < 2 || powmod64(2, t, p) != 1) throw UsageError("mersenne_cofactor: p does not divide 2^t - 1");
    // Schoolbook long division of the all-ones t-bit string by p, high bit first.
    std::vector<std::uint64_t> q((t + 63) / 64, 0);
    u128 rem = 0;
    for (unsigned i = t; i-- > 0;) {
        rem = (rem << 1) | 1u;
        if (rem >= p) {
            rem -= p;
            q[i / 64] |= std::uint64_t{1} << (i % 64);
        }
    }
    return q;
}

BfElem cp_generator(const FieldHandle& field, std::uint64_t p, std::uint64_t seed) {
    const unsigned t = field->degree();
    if (p < 2 || powmod64(2, t, p) != 1) throw UsageError("cp_generator: p does not divide 2^t - 1");
    const auto e = mersenne_cofactor(t, p);
    Rng rng = make_rng(seed, p);
    for (;;) {
        Gf2Poly r = field->random_element(rng);
        if (r.is_zero()) continue;
        Gf2Poly g = field->pow(r, e);
        if (!g.is_one()) return {field, std::move(g)};
    }
}

std::size_t Gf2PolyHash::operator()(const Gf2Poly& f) const noexcept {
    std::uint64_t h = 0x84222325cbf29ce4ULL;
    for (auto w : f.words()) h = splitmix64(h ^ w);
    return static_cast<std::size_t>(h);
}

std::uint64_t bsgs_dlog(const BfElem& g, const BfElem& h, std::uint64_t p) {
    if (p < 2) throw UsageError("bsgs_dlog: group order must be >= 2");
    const BinaryField& f = *g.field();
    const auto m = static_cast<std::uint64_t>(std::ceil(std::sqrt(static_cast<long double>(p))));
    std::unordered_map<Gf2Poly, std::uint64_t, Gf2PolyHash> baby;
    baby.reserve(m * 2);
    Gf2Poly cur = Gf2Poly::one();
    for (std::uint64_t j = 0; j < m; ++j) {
        baby.emplace(cur, j);
        cur = f.mul(cur, g.value());
    }
    const Gf2Poly giant = f.pow(g.value(), p - (m % p)); // g^(-m)
    Gf2Poly gamma = h.value();
    for (std::uint64_t i = 0; i <= m; ++i) {
        if (auto it = baby.find(gamma); it != baby.end()) return (i * m + it->second) % p;
        gamma = f.mul(gamma, giant);
    }
    throw NotFoundError("bsgs_dlog: element is not in the subgroup generated by g");
}

SmallField::SmallField(const BinaryField& field)
    : degree_(field.degree()), modulus_(field.modulus().word(0)), trace_mask_(0) {
    if (degree_ > 32) throw UsageError("SmallField: degree must be <= 32");
    const auto tp = field.trace_powers();
    for (unsigned i = 0; i < degree_; ++i) {
        if (bit_at(tp, i)) trace_mask_ |= std::uint64_t{1} << i;
    }
    // x^(t+i) mod f by repeated multiplication by x.
    const std::uint64_t low = modulus_ ^ (std::uint64_t{1} << degree_);
    std::uint64_t v = low;
    for (unsigned i = 0; i < degree_; ++i) {
        high_reduce_.push_back(v);
        v <<= 1;
        if ((v >> degree_) & 1u) v = (v ^ (std::uint64_t{1} << degree_)) ^ low;
    }
    for (unsigned i = 0; i < degree_; ++i) {
        std::uint64_t row = 0;
        for (unsigned j = 0; j < degree_; ++j) {
            if (bit_at(tp, i + j)) row |= std::uint64_t{1} << j;
        }
        dual_rows_.push_back(row);
    }
}

std::uint64_t SmallField::mul(std::uint64_t a, std::uint64_t b) const noexcept {
    std::uint64_t lo;
    std::uint64_t hi;
    detail::clmul64(a, b, lo, hi);
    std::uint64_t high = lo >> degree_;
    std::uint64_t r = lo & ((std::uint64_t{1} << degree_) - 1);
    while (high) {
        const int i = std::countr_zero(high);
        r ^= high_reduce_[static_cast<std::size_t>(i)];
        high &= high - 1;
    }
    return r;
}

std::uint64_t SmallField::pow(std::uint64_t a, std::uint64_t e) const noexcept {
    std::uint64_t r = 1;
    while (e) {
        if (e & 1) r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

std::uint64_t SmallField::dual_coordinates(std::uint64_t a) const noexcept {
    std::uint64_t y = 0;
    for (unsigned i = 0; i < degree_; ++i) {
        y |= static_cast<std::uint64_t>(std::popcount(a & dual_rows_[i]) & 1) << i;
    }
    return y;
}

} // namespace niceldc
