#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "niceldc/bigint.hpp"
#include "niceldc/binary_field.hpp"

namespace niceldc {

/// An odd-size set of exponents {gamma_i} with sum g^gamma_i = 0, where g is
/// pinned by (modulus, generator) so the claim can be rechecked anywhere.
struct DependencyWitness {
    std::uint64_t p = 0;
    std::uint64_t t = 0;
    Gf2Poly modulus;
    Gf2Poly generator;
    std::vector<std::uint64_t> exponents; // sorted, distinct

    std::size_t k_prime() const noexcept { return exponents.size(); }

    /// `p t k' modulus_hex generator_hex gamma_1,...,gamma_k'`
    std::string to_text() const;
    static DependencyWitness from_text(std::string_view line);

    friend bool operator==(const DependencyWitness&, const DependencyWitness&) = default;
};

/// Rebuilds the field from the stored modulus and rechecks every claim:
/// irreducibility, t = ord2(p), g of order p, odd distinct exponents, zero sum.
bool verify_witness(const DependencyWitness& w);

// Filter predicates. All comparisons are exact integer inequalities.

/// t <= sqrt(4p/3). False rules out three roots summing to zero.
bool necessary_cond_3(std::uint64_t p, std::uint64_t t);
/// t <= 2 p^(1 - 1/(k-1)) for odd k >= 3. False rules out k roots summing to zero.
bool necessary_cond_k(std::uint64_t p, std::uint64_t t, unsigned k);
/// t < (4/3) log2 p. True guarantees three roots summing to zero.
bool sufficient_cond_3(std::uint64_t p, std::uint64_t t);
/// p <= 3 or t odd.
bool odd_t_filter(std::uint64_t p, std::uint64_t t);

/// Whether gcd(x^p + 1, (x+1)^p + 1) is nonconstant. Quadratic in p.
bool gcd_test_3(std::uint64_t p);

struct ClassTestResult {
    FieldHandle field;
    Gf2Poly generator;
    /// Some i with g^i + 1 in C_p, the least such class representative.
    std::optional<std::uint64_t> exponent;
    std::uint64_t classes_tested = 0;
};

/// Tests one representative per class {+-i 2^j} for g^i + 1 in C_p. The field
/// and generator are pure functions of (p, seed).
ClassTestResult class_test_3(std::uint64_t p, std::uint64_t seed = 0);

/// Canonical witness {0, 1, d} with g = zeta, zeta + 1 = zeta^d, where d is the
/// least such exponent over all admissible zeta. The exponent set does not
/// depend on the seed; the stored field and generator do.
/// Throws NotFoundError when no three roots sum to zero.
DependencyWitness extract_witness_3(std::uint64_t p, std::uint64_t seed = 0);

struct BruteForceLimits {
    unsigned t_limit = 20;
    /// Cap on elementary steps for each of the two counts.
    std::uint64_t max_work = 4'000'000'000ULL;
    /// Cap on the number of distinct sets kept in the listing.
    std::size_t max_listed = 1000;
};

struct BruteForceResult {
    std::uint64_t p = 0;
    std::uint64_t t = 0;
    unsigned k = 0;
    /// Ordered k-tuples of C_p (repetition allowed) summing to zero.
    u128 ordered_count = 0;
    /// k-subsets of distinct elements summing to zero; empty when over budget.
    std::optional<std::uint64_t> distinct_count;
    /// Exponent sets (relative to the returned generator), sorted.
    std::vector<std::vector<std::uint64_t>> distinct_sets;
    bool listing_truncated = false;
    Gf2Poly modulus;
    Gf2Poly generator;
};

/// Exhaustive enumeration over C_p inside F_{2^t}; the independent oracle for
/// the other tests. Throws ResourceLimitError above the limits and UsageError
/// for even k.
BruteForceResult brute_force_deps(std::uint64_t p, unsigned k, const BruteForceLimits& limits = {},
                                  std::uint64_t seed = 0);

struct FourierProfile {
    std::uint64_t p = 0;
    std::uint64_t t = 0;
    Gf2Poly modulus;
    /// chi_a(C_p) for a given by its polynomial bits (a < 2^t).
    std::vector<std::int32_t> coefficients;
    std::uint64_t max_nontrivial = 0;
    BigInt parseval_sum;
    /// Value -> number of a with chi_a(C_p) = value.
    std::map<std::int64_t, std::uint64_t> histogram;
    /// M_k for odd k <= k_max.
    std::map<unsigned, BigInt> m_counts;
};

inline constexpr unsigned kFourierTLimit = 24;

/// All 2^t character sums of C_p via a Walsh-Hadamard transform in trace-dual
/// coordinates. Throws ResourceLimitError when t exceeds t_limit.
FourierProfile fourier_profile(std::uint64_t p, unsigned k_max = 5, unsigned t_limit = kFourierTLimit,
                               std::uint64_t seed = 0);

/// M_k = 2^-t sum_a chi_a^k, exact. Throws std::logic_error if not integral.
BigInt fourier_moment(const FourierProfile& profile, unsigned k);

/// F^(k-2) 2^t < p^(k-1), the exact form of F/p < (p/2^t)^(1/(k-2)).
bool fourier_sufficient_k(const FourierProfile& profile, unsigned k);

/// Least odd k with M_k(C_p) > 0; equals the least size of a set of distinct
/// roots summing to zero.
unsigned min_k_dependency(std::uint64_t p, unsigned t_limit = kFourierTLimit, std::uint64_t seed = 0);

} // namespace niceldc
