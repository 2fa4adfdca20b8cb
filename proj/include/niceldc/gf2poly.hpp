#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace niceldc {

/// Degree reported for the zero polynomial (stands in for minus infinity).
inline constexpr std::int64_t kZeroDegree = std::numeric_limits<std::int64_t>::min();

/// Polynomial over GF(2), coefficients packed little-endian by exponent:
/// the coefficient of x^i is bit (i % 64) of word (i / 64).
///
/// The word vector never ends in a zero word, so the zero polynomial owns no
/// words and equality is plain word comparison.
class Gf2Poly {
public:
    using Word = std::uint64_t;
    static constexpr unsigned kWordBits = 64;

    Gf2Poly() = default;
    explicit Gf2Poly(std::vector<Word> words);

    static Gf2Poly one();
    static Gf2Poly x();
    static Gf2Poly monomial(std::uint64_t exponent);
    static Gf2Poly from_uint(std::uint64_t bits);
    /// Sum of x^e over the given exponents; repeated exponents cancel in pairs.
    static Gf2Poly from_exponents(std::span<const std::uint64_t> exponents);
    /// Parses the format written by to_hex().
    static Gf2Poly from_hex(std::string_view hex);

    std::int64_t degree() const noexcept;
    bool is_zero() const noexcept { return words_.empty(); }
    bool is_one() const noexcept { return words_.size() == 1 && words_[0] == 1; }
    /// Zero or one.
    bool is_constant() const noexcept { return words_.empty() || is_one(); }

    bool coeff(std::uint64_t i) const noexcept;
    void set_coeff(std::uint64_t i, bool value);
    void flip_coeff(std::uint64_t i);

    /// Number of nonzero coefficients.
    std::size_t weight() const noexcept;
    /// Exponents with nonzero coefficient, increasing.
    std::vector<std::uint64_t> support() const;

    std::span<const Word> words() const noexcept { return words_; }
    Word word(std::size_t i) const noexcept { return i < words_.size() ? words_[i] : 0; }

    Gf2Poly& operator+=(const Gf2Poly& rhs);
    Gf2Poly& operator*=(const Gf2Poly& rhs);
    friend Gf2Poly operator+(Gf2Poly lhs, const Gf2Poly& rhs) { return lhs += rhs; }
    friend Gf2Poly operator*(const Gf2Poly& lhs, const Gf2Poly& rhs);
    friend bool operator==(const Gf2Poly& lhs, const Gf2Poly& rhs) = default;

    /// x^n * f
    Gf2Poly shifted_up(std::uint64_t n) const;
    /// floor(f / x^n)
    Gf2Poly shifted_down(std::uint64_t n) const;
    /// f mod x^n
    Gf2Poly truncated(std::uint64_t n) const;
    Gf2Poly square() const;

    /// Hex words, lowest-degree word first, 16 digits per word; "0" for zero.
    std::string to_hex() const;
    /// Human-readable form, e.g. "x^3 + x + 1".
    std::string to_string() const;

private:
    void trim() noexcept;

    std::vector<Word> words_;
};

struct Gf2DivMod {
    Gf2Poly quotient;
    Gf2Poly remainder;
};

/// Euclidean division; throws UsageError when b is zero.
Gf2DivMod poly_divmod(const Gf2Poly& a, const Gf2Poly& b);
Gf2Poly poly_mod(Gf2Poly a, const Gf2Poly& b);

/// Greatest common divisor (every nonzero GF(2) polynomial is monic).
/// gcd(a, 0) = a and gcd(0, 0) = 0.
Gf2Poly poly_gcd(Gf2Poly a, Gf2Poly b);

/// base^e mod modulus by square-and-multiply. Returns 1 for e = 0.
/// Throws UsageError when the modulus is constant.
Gf2Poly poly_powmod(const Gf2Poly& base, std::uint64_t e, const Gf2Poly& modulus);

/// x^deg(f) * f(1/x).
Gf2Poly poly_reciprocal(const Gf2Poly& f);

/// Ben-Or irreducibility test.
bool is_irreducible(const Gf2Poly& f);

/// Barrett reduction modulo a fixed nonconstant polynomial f of degree d.
/// Inputs of degree < 2d reduce with two multiplications and no division.
class Gf2Reducer {
public:
    explicit Gf2Reducer(Gf2Poly modulus);

    const Gf2Poly& modulus() const noexcept { return modulus_; }
    std::int64_t degree() const noexcept { return degree_; }

    Gf2Poly reduce(Gf2Poly a) const;
    Gf2Poly mul(const Gf2Poly& a, const Gf2Poly& b) const { return reduce(a * b); }
    Gf2Poly sqr(const Gf2Poly& a) const { return reduce(a.square()); }
    Gf2Poly pow(const Gf2Poly& base, std::uint64_t e) const;
    /// Exponent given as little-endian 64-bit words.
    Gf2Poly pow(const Gf2Poly& base, std::span<const std::uint64_t> exponent) const;

private:
    Gf2Poly modulus_;
    Gf2Poly mu_; // floor(x^(2d) / f)
    std::int64_t degree_;
};

namespace detail {

/// 64x64 -> 128 carry-less product.
void clmul64(std::uint64_t a, std::uint64_t b, std::uint64_t& lo, std::uint64_t& hi) noexcept;

/// out[0 .. na+nb) = a * b; out must not alias the inputs.
void mul_words(const std::uint64_t* a, std::size_t na, const std::uint64_t* b, std::size_t nb,
               std::uint64_t* out);

/// Whether clmul64 uses the hardware instruction.
bool hardware_clmul() noexcept;

} // namespace detail

} // namespace niceldc
