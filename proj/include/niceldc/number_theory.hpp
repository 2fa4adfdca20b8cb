#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "niceldc/bigint.hpp"

namespace niceldc {

std::uint64_t mulmod64(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod64(std::uint64_t base, std::uint64_t e, std::uint64_t m);

/// Deterministic Miller-Rabin over the full 64-bit range.
bool is_prime(std::uint64_t n);
/// Miller-Rabin with the first 20 prime bases; deterministic below 2^64.
bool is_prime_u128(u128 n);

template <typename Int>
struct PrimePower {
    Int prime;
    unsigned exponent;
    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Trial division to 10^4, then Brent's Pollard rho. Sorted by prime.
std::vector<PrimePower<std::uint64_t>> factor_u64(std::uint64_t n);

struct Factorization {
    std::vector<PrimePower<u128>> factors; // sorted by prime
    /// False when the iteration budget ran out; the unsplit cofactor is then
    /// listed with its composite value and no primality claim is made.
    bool complete = true;
};

/// Full factorization of n >= 1. budget caps the Pollard-rho iterations per
/// split (0 = unlimited).
Factorization factor_u128(u128 n, std::uint64_t budget = 0);

/// Factorization of 2^t - 1 (1 <= t <= 127), split along cyclotomic values
/// Phi_d(2) for d | t before any rho work.
Factorization factor_mersenne(unsigned t, std::uint64_t budget = 0);

/// P(m): largest prime factor of m >= 2. Throws UsageError for m < 2 and
/// ResourceLimitError when the budget is exhausted.
u128 largest_prime_factor(u128 m, std::uint64_t budget = 0);

/// Least e >= 1 with a^e = 1 (mod n). Requires gcd(a, n) = 1 and n >= 2.
std::uint64_t multiplicative_order(std::uint64_t a, std::uint64_t n);

/// Multiplicative order of 2 modulo an odd n >= 3 (the least t with n | 2^t - 1).
std::uint64_t ord2(std::uint64_t n);

/// An odd prime together with t = ord2(p) and the factorization of p - 1.
struct PrimeCtx {
    std::uint64_t p = 0;
    std::uint64_t t = 0;
    std::vector<PrimePower<std::uint64_t>> p_minus_1;
};

/// Throws UsageError unless p is an odd prime.
PrimeCtx make_prime_ctx(std::uint64_t p);

/// Segmented sieve of Eratosthenes; calls visit(p) for every prime in
/// [lo, hi] in increasing order. visit may return false to stop early.
void for_each_prime(std::uint64_t lo, std::uint64_t hi, const std::function<bool(std::uint64_t)>& visit);

/// All primes in [lo, hi], increasing.
std::vector<std::uint64_t> sieve_primes(std::uint64_t lo, std::uint64_t hi);

std::string to_string_u128(u128 v);
u128 parse_u128(const std::string& s);

inline u128 mersenne(unsigned t) { return t >= 128 ? ~u128{0} : (u128{1} << t) - 1; }

} // namespace niceldc
