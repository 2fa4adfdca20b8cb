#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "niceldc/gf2poly.hpp"
#include "niceldc/rootsum.hpp"

namespace niceldc {

using ResidueSet = std::vector<std::uint64_t>; // sorted, distinct residues mod p
using ZpVector = std::vector<std::uint64_t>;

/// <2> in Z_p^*, sorted.
ResidueSet subgroup_2(std::uint64_t p);

/// The exponent set of a witness. Throws UsageError if the witness fails
/// verification.
ResidueSet build_s1(const DependencyWitness& witness);

/// sum_{s in S} x^s.
Gf2Poly phi(const ResidueSet& s);

/// gcd(x^p + 1, phi_S). A constant result means S is unusable as S_1.
Gf2Poly compute_tau(std::uint64_t p, const ResidueSet& s1);

/// Outcome of an exhaustive check; carries the first violation when it fails.
struct Violation {
    std::string reason;
    std::optional<std::uint64_t> a; // alpha, or row index i
    std::optional<std::uint64_t> b; // beta, or column index j
};

struct CheckResult {
    std::optional<Violation> violation;
    explicit operator bool() const noexcept { return !violation; }
};

/// |S0 cap (alpha + beta S1)| even for every alpha in Z_p and beta in <2>,
/// plus |S1| odd and S0 nonempty.
CheckResult verify_algebraic_niceness(std::uint64_t p, const ResidueSet& s0, const ResidueSet& s1);

struct BuildS0Options {
    unsigned exhaustive_dim = 20;
    std::uint64_t random_tries = 20000;
    std::uint64_t seed = 0;
};

/// Support of a codeword of weight >= ceil(p/2) in the dual of the cyclic code
/// generated by tau. Exhaustive (maximum weight, first in Gray order) when the
/// dual dimension is at most exhaustive_dim, randomized hill-climbing otherwise.
/// The result always passes verify_algebraic_niceness.
/// Throws UsageError when tau is constant and SearchExhaustedError on failure.
ResidueSet build_s0(std::uint64_t p, const ResidueSet& s1, const BuildS0Options& opts = {});

struct AlgebraicNicePair {
    std::uint64_t p = 0;
    ResidueSet s1;
    ResidueSet s0;
    Gf2Poly tau;

    std::size_t k_prime() const noexcept { return s1.size(); }

    /// Validates every invariant; throws UsageError on failure.
    static AlgebraicNicePair make(std::uint64_t p, ResidueSet s1, ResidueSet s0);

    /// Header `p |S1| |S0|`, then S1 and S0 as comma-separated lines.
    void write(std::ostream& os) const;
    static AlgebraicNicePair read(std::istream& is);
};

/// Witness, S1, S0 for p, or NotFoundError when p has no 3-dependency.
AlgebraicNicePair build_nice_pair(std::uint64_t p, std::uint64_t seed = 0, const BuildS0Options& opts = {});

struct MatchingFamily {
    std::uint64_t p = 0;
    std::size_t m = 0;
    std::vector<ZpVector> u;
    std::vector<ZpVector> v;
    ResidueSet s; // allowed off-diagonal dot products

    std::size_t n() const noexcept { return u.size(); }

    /// Header `p m n`, then u_1..u_n, v_1..v_n and S, one comma-separated line each.
    void write(std::ostream& os) const;
    static MatchingFamily read(std::istream& is);
};

std::uint64_t dot(const ZpVector& a, const ZpVector& b, std::uint64_t p);

/// u_i = e_i, v_i = 1 - e_i; S = <2>. Requires m >= 2.
MatchingFamily trivial_family(std::uint64_t p, std::size_t m);

/// One pair per (p-1)-subset T of [m']: u_T = 1_T, v_T = 1 - 1_T; S = Z_p^*.
MatchingFamily incidence_family(std::uint64_t p, std::size_t m_prime, std::size_t max_pairs = 1u << 16);

/// w-th tensor powers of every u_i and v_i; S becomes {z^w : z in S}.
/// Throws ResourceLimitError when m^w exceeds max_length.
MatchingFamily tensor_power_family(const MatchingFamily& fam, unsigned w, std::size_t max_length = 1u << 20);

/// Exhaustive n^2 check of (u_i, v_i) = 0 and (u_j, v_i) in S for i != j.
CheckResult verify_matching(const MatchingFamily& fam);

ZpVector tensor(const ZpVector& a, const ZpVector& b, std::uint64_t p);

struct ZpMonomial {
    std::uint64_t coeff = 1;
    std::vector<unsigned> exponents; // one per variable
};

/// Multivariate polynomial over Z_p as an explicit monomial list.
struct ZpPolynomial {
    std::uint64_t p = 0;
    std::size_t vars = 0;
    std::vector<ZpMonomial> terms;

    std::uint64_t evaluate(const std::vector<std::uint64_t>& xs) const;
    /// Same monomials, every coefficient 1.
    ZpPolynomial bar() const;
};

/// Concatenation over monomials c * u_1^(x)a_1 (x) ... (x) u_h^(x)a_h.
ZpVector poly_vector(const ZpPolynomial& f, const std::vector<ZpVector>& us);

/// (f(u), f_bar(v)) == f((u_1, v_1), ..., (u_h, v_h)).
bool check_poly_dot_claim(const ZpPolynomial& f, const std::vector<ZpVector>& us, const std::vector<ZpVector>& vs);
/// Same with an explicit right-hand polynomial in place of f_bar.
bool check_poly_dot_claim(const ZpPolynomial& f, const ZpPolynomial& rhs, const std::vector<ZpVector>& us,
                          const std::vector<ZpVector>& vs);

} // namespace niceldc
