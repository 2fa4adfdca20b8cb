#pragma once

#include <bit>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "niceldc/gf2poly.hpp"
#include "niceldc/rng.hpp"

namespace niceldc {

/// F_{2^t} as GF(2)[x] / (modulus). Elements are Gf2Poly values of degree < t.
class BinaryField {
public:
    /// Throws UsageError unless the modulus is irreducible.
    explicit BinaryField(Gf2Poly modulus);

    unsigned degree() const noexcept { return degree_; }
    const Gf2Poly& modulus() const noexcept { return reducer_.modulus(); }

    Gf2Poly reduce(Gf2Poly a) const { return reducer_.reduce(std::move(a)); }
    Gf2Poly mul(const Gf2Poly& a, const Gf2Poly& b) const { return reducer_.mul(a, b); }
    Gf2Poly sqr(const Gf2Poly& a) const { return reducer_.sqr(a); }
    Gf2Poly pow(const Gf2Poly& a, std::uint64_t e) const { return reducer_.pow(a, e); }
    Gf2Poly pow(const Gf2Poly& a, std::span<const std::uint64_t> e) const { return reducer_.pow(a, e); }

    /// Absolute trace, via the precomputed trace form Tr(x^i), i < t.
    bool trace(const Gf2Poly& a) const;
    /// Bit i holds Tr(x^i) for i < 2t - 1 (power sums of the modulus roots).
    std::span<const std::uint64_t> trace_powers() const;

    Gf2Poly random_element(Rng& rng) const;

private:
    unsigned degree_;
    Gf2Reducer reducer_;
    mutable std::once_flag trace_once_;
    mutable std::vector<std::uint64_t> trace_powers_;
};

using FieldHandle = std::shared_ptr<const BinaryField>;

/// Field of degree t with a random irreducible modulus, a pure function of
/// (t, seed). For t = 1 the modulus is x + 1.
FieldHandle build_field(unsigned t, std::uint64_t seed);

/// Element of a binary field; always reduced modulo the field modulus.
class BfElem {
public:
    BfElem(FieldHandle field, Gf2Poly value);

    static BfElem zero(FieldHandle field) { return {std::move(field), Gf2Poly{}}; }
    static BfElem one(FieldHandle field) { return {std::move(field), Gf2Poly::one()}; }

    const FieldHandle& field() const noexcept { return field_; }
    const Gf2Poly& value() const noexcept { return value_; }
    bool is_zero() const noexcept { return value_.is_zero(); }
    bool is_one() const noexcept { return value_.is_one(); }

    BfElem pow(std::uint64_t e) const { return {field_, field_->pow(value_, e)}; }
    BfElem square() const { return {field_, field_->sqr(value_)}; }

    friend BfElem operator+(const BfElem& a, const BfElem& b);
    friend BfElem operator*(const BfElem& a, const BfElem& b);
    friend bool operator==(const BfElem& a, const BfElem& b) { return a.value_ == b.value_; }

private:
    FieldHandle field_;
    Gf2Poly value_;
};

/// Absolute trace, 0 or 1.
bool trace(const BfElem& x);

/// (2^t - 1) / p as little-endian words. Requires p | 2^t - 1.
std::vector<std::uint64_t> mersenne_cofactor(unsigned t, std::uint64_t p);

/// A generator of the order-p subgroup C_p: r^((2^t - 1)/p) for seeded random
/// r, retried while the result is 1. Throws UsageError unless p | 2^t - 1.
BfElem cp_generator(const FieldHandle& field, std::uint64_t p, std::uint64_t seed);

/// Baby-step giant-step: d in [0, p) with g^d = h, where g has order p.
/// Throws NotFoundError when h is not in <g>.
std::uint64_t bsgs_dlog(const BfElem& g, const BfElem& h, std::uint64_t p);

/// Word-hash for Gf2Poly keys.
struct Gf2PolyHash {
    std::size_t operator()(const Gf2Poly& f) const noexcept;
};

/// Single-word arithmetic for fields with t <= 32, used by the exhaustive
/// enumerations (transforms, brute force) where Gf2Poly would be wasteful.
class SmallField {
public:
    explicit SmallField(const BinaryField& field);

    unsigned degree() const noexcept { return degree_; }
    std::uint64_t size() const noexcept { return std::uint64_t{1} << degree_; }
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const noexcept;
    std::uint64_t pow(std::uint64_t a, std::uint64_t e) const noexcept;
    bool trace(std::uint64_t a) const noexcept { return std::popcount(a & trace_mask_) & 1; }
    /// Bits (Tr(x^i * a))_{i < t}: coordinates of a in the trace-dual basis,
    /// so Tr(b * a) = parity(b & dual_coordinates(a)).
    std::uint64_t dual_coordinates(std::uint64_t a) const noexcept;

private:
    unsigned degree_;
    std::uint64_t modulus_;
    std::uint64_t trace_mask_;
    std::vector<std::uint64_t> high_reduce_; // x^(t+i) mod f, i < t
    std::vector<std::uint64_t> dual_rows_;   // row i: bits j of Tr(x^(i+j))
};

} // namespace niceldc
