#include "niceldc/number_theory.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "niceldc/errors.hpp"

namespace niceldc {

namespace {

constexpr std::uint64_t kTrialLimit = 10000;

const std::vector<std::uint32_t>& small_primes() {
    static const std::vector<std::uint32_t> primes = [] {
        std::vector<std::uint32_t> out;
        std::vector<bool> composite(kTrialLimit + 1, false);
        for (std::uint32_t i = 2; i <= kTrialLimit; ++i) {
            if (composite[i]) continue;
            out.push_back(i);
            for (std::uint64_t j = std::uint64_t{i} * i; j <= kTrialLimit; j += i) composite[j] = true;
        }
        return out;
    }();
    return primes;
}

u128 addmod128(u128 a, u128 b, u128 m) {
    u128 s = a + b;
    if (s < a || s >= m) s -= m;
    return s;
}

u128 mulmod128(u128 a, u128 b, u128 m) {
    if (m <= UINT64_MAX) {
        return mulmod64(static_cast<std::uint64_t>(a % m), static_cast<std::uint64_t>(b % m),
                        static_cast<std::uint64_t>(m));
    }
    a %= m;
    b %= m;
    u128 r = 0;
    while (b) {
        if (b & 1) r = addmod128(r, a, m);
        a = addmod128(a, a, m);
        b >>= 1;
    }
    return r;
}

u128 powmod128(u128 base, u128 e, u128 m) {
    u128 r = 1 % m;
    base %= m;
    while (e) {
        if (e & 1) r = mulmod128(r, base, m);
        base = mulmod128(base, base, m);
        e >>= 1;
    }
    return r;
}

template <typename Int>
Int binary_gcd(Int a, Int b) {
    while (b) {
        a %= b;
        std::swap(a, b);
    }
    return a;
}

template <typename Int>
bool miller_rabin(Int n, std::initializer_list<std::uint64_t> bases) {
    if (n < 2) return false;
    for (std::uint64_t q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    Int d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : bases) {
        if (Int(a) % n == 0) continue;
        Int x;
        if constexpr (sizeof(Int) == 8) {
            x = powmod64(a, d, n);
        } else {
            x = powmod128(a, d, n);
        }
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (unsigned r = 1; r < s; ++r) {
            if constexpr (sizeof(Int) == 8) {
                x = mulmod64(x, x, n);
            } else {
                x = mulmod128(x, x, n);
            }
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

// Brent's variant of Pollard rho. Returns a nontrivial factor or 0 when the
// iteration budget runs out.
template <typename Int>
Int rho_split(Int n, Int c, std::uint64_t budget) {
    auto mul = [n](Int a, Int b) -> Int {
        if constexpr (sizeof(Int) == 8) {
            return mulmod64(a, b, n);
        } else {
            return mulmod128(a, b, n);
        }
    };
    auto f = [&](Int v) -> Int {
        Int r = mul(v, v) + c;
        return r >= n || r < c ? r - n : r;
    };
    auto diff = [](Int a, Int b) { return a > b ? a - b : b - a; };
    constexpr std::uint64_t kBatch = 128;
    Int y = 2, x = 2, ys = 2, q = 1, g = 1;
    std::uint64_t r = 1;
    std::uint64_t spent = 0;
    do {
        x = y;
        for (std::uint64_t i = 0; i < r; ++i) y = f(y);
        std::uint64_t k = 0;
        while (k < r && g == 1) {
            ys = y;
            const std::uint64_t lim = std::min(kBatch, r - k);
            for (std::uint64_t i = 0; i < lim; ++i) {
                y = f(y);
                q = mul(q, diff(x, y));
            }
            g = binary_gcd(q, n);
            k += kBatch;
            spent += lim;
            if (budget && spent > budget) return 0;
        }
        r *= 2;
    } while (g == 1);
    if (g == n) {
        do {
            ys = f(ys);
            g = binary_gcd(diff(x, ys), n);
        } while (g == 1);
    }
    return g == n ? Int(0) : g;
}

template <typename Int>
Int find_factor(Int n, std::uint64_t budget) {
    if (n % 2 == 0) return 2;
    for (Int c = 1; c < 64; ++c) {
        const Int d = rho_split<Int>(n, c, budget);
        if (d) return d;
        if (budget) return 0;
    }
    return 0;
}

void factor_rec(u128 n, std::map<u128, unsigned>& acc, std::uint64_t budget, bool& complete) {
    if (n == 1) return;
    if (n <= UINT64_MAX ? is_prime(static_cast<std::uint64_t>(n)) : is_prime_u128(n)) {
        ++acc[n];
        return;
    }
    u128 d = n <= UINT64_MAX ? u128{find_factor<std::uint64_t>(static_cast<std::uint64_t>(n), budget)}
                             : find_factor<u128>(n, budget);
    if (d == 0) {
        complete = false;
        ++acc[n];
        return;
    }
    factor_rec(d, acc, budget, complete);
    factor_rec(n / d, acc, budget, complete);
}

} // namespace

std::uint64_t mulmod64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod64(std::uint64_t base, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    base %= m;
    while (e) {
        if (e & 1) r = mulmod64(r, base, m);
        base = mulmod64(base, base, m);
        e >>= 1;
    }
    return r;
}

bool is_prime(std::uint64_t n) {
    return miller_rabin<std::uint64_t>(n, {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37});
}

bool is_prime_u128(u128 n) {
    if (n <= UINT64_MAX) return is_prime(static_cast<std::uint64_t>(n));
    return miller_rabin<u128>(n, {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71});
}

std::vector<PrimePower<std::uint64_t>> factor_u64(std::uint64_t n) {
    if (n == 0) throw UsageError("factor_u64: zero has no factorization");
    const Factorization f = factor_u128(n);
    std::vector<PrimePower<std::uint64_t>> out;
    out.reserve(f.factors.size());
    for (const auto& pp : f.factors) out.push_back({static_cast<std::uint64_t>(pp.prime), pp.exponent});
    return out;
}

Factorization factor_u128(u128 n, std::uint64_t budget) {
    if (n == 0) throw UsageError("factor_u128: zero has no factorization");
    std::map<u128, unsigned> acc;
    for (std::uint32_t q : small_primes()) {
        if (u128{q} * q > n) break;
        while (n % q == 0) {
            ++acc[q];
            n /= q;
        }
    }
    Factorization out;
    if (n > 1) {
        if (n < u128{kTrialLimit} * kTrialLimit) {
            ++acc[n];
        } else {
            factor_rec(n, acc, budget, out.complete);
        }
    }
    for (const auto& [p, e] : acc) out.factors.push_back({p, e});
    return out;
}

Factorization factor_mersenne(unsigned t, std::uint64_t budget) {
    if (t < 1 || t > 127) throw UsageError("factor_mersenne: t must lie in [1, 127]");
    // Phi_d(2) = (2^d - 1) / prod_{e | d, e < d} Phi_e(2); every division is exact.
    std::map<unsigned, u128> phi;
    std::vector<unsigned> divisors;
    for (unsigned d = 1; d <= t; ++d) {
        if (t % d == 0) divisors.push_back(d);
    }
    for (unsigned d : divisors) {
        u128 v = mersenne(d);
        for (unsigned e : divisors) {
            if (e < d && d % e == 0) v /= phi[e];
        }
        phi[d] = v;
    }
    std::map<u128, unsigned> acc;
    Factorization out;
    for (unsigned d : divisors) {
        const Factorization part = factor_u128(phi[d], budget);
        out.complete = out.complete && part.complete;
        for (const auto& pp : part.factors) acc[pp.prime] += pp.exponent;
    }
    for (const auto& [p, e] : acc) out.factors.push_back({p, e});
    return out;
}

u128 largest_prime_factor(u128 m, std::uint64_t budget) {
    if (m < 2) throw UsageError("largest_prime_factor: m must be >= 2");
    const Factorization f = factor_u128(m, budget);
    if (!f.complete) throw ResourceLimitError("largest_prime_factor: factoring budget exhausted");
    return f.factors.back().prime;
}

std::uint64_t multiplicative_order(std::uint64_t a, std::uint64_t n) {
    if (n < 2) throw UsageError("multiplicative_order: modulus must be >= 2");
    if (binary_gcd(a % n, n) != 1) throw UsageError("multiplicative_order: base not invertible");
    // phi(n) from the factorization of n, then strip prime factors of phi(n).
    std::uint64_t phi = 1;
    for (const auto& [q, e] : factor_u64(n)) {
        phi *= q - 1;
        for (unsigned i = 1; i < e; ++i) phi *= q;
    }
    std::uint64_t order = phi;
    for (const auto& [q, e] : factor_u64(phi)) {
        for (unsigned i = 0; i < e && order % q == 0; ++i) {
            if (powmod64(a, order / q, n) != 1) break;
            order /= q;
        }
    }
    return order;
}

std::uint64_t ord2(std::uint64_t n) {
    if (n < 3 || n % 2 == 0) throw UsageError("ord2: argument must be odd and >= 3");
    return multiplicative_order(2, n);
}

PrimeCtx make_prime_ctx(std::uint64_t p) {
    if (p < 3 || p % 2 == 0 || !is_prime(p)) throw UsageError("make_prime_ctx: p must be an odd prime");
    PrimeCtx ctx;
    ctx.p = p;
    ctx.p_minus_1 = factor_u64(p - 1);
    std::uint64_t order = p - 1;
    for (const auto& [q, e] : ctx.p_minus_1) {
        for (unsigned i = 0; i < e; ++i) {
            if (powmod64(2, order / q, p) != 1) break;
            order /= q;
        }
    }
    ctx.t = order;
    return ctx;
}

void for_each_prime(std::uint64_t lo, std::uint64_t hi, const std::function<bool(std::uint64_t)>& visit) {
    if (hi < 2 || lo > hi) return;
    if (lo <= 2) {
        if (!visit(2)) return;
        lo = 3;
    }
    if (lo % 2 == 0) ++lo;
    if (lo > hi) return;
    const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(hi))) + 1;
    std::vector<std::uint64_t> base;
    {
        std::vector<bool> composite(root + 1, false);
        for (std::uint64_t i = 3; i <= root; i += 2) {
            if (composite[i]) continue;
            base.push_back(i);
            for (std::uint64_t j = i * i; j <= root; j += 2 * i) composite[j] = true;
        }
    }
    // Each segment covers odd numbers lo + 2*i for i < kSegment.
    constexpr std::uint64_t kSegment = 1 << 16;
    std::vector<std::uint8_t> mark(kSegment);
    for (std::uint64_t start = lo; start <= hi; start += 2 * kSegment) {
        const std::uint64_t count = std::min<std::uint64_t>(kSegment, (hi - start) / 2 + 1);
        std::fill(mark.begin(), mark.begin() + static_cast<std::ptrdiff_t>(count), 0);
        const std::uint64_t last = start + 2 * (count - 1);
        for (std::uint64_t q : base) {
            if (q * q > last) break;
            std::uint64_t first = std::max(q * q, (start + q - 1) / q * q);
            if (first % 2 == 0) first += q;
            for (std::uint64_t m = first; m <= last; m += 2 * q) mark[(m - start) / 2] = 1;
        }
        for (std::uint64_t i = 0; i < count; ++i) {
            if (!mark[i] && start + 2 * i > 1 && !visit(start + 2 * i)) return;
        }
    }
}

std::vector<std::uint64_t> sieve_primes(std::uint64_t lo, std::uint64_t hi) {
    std::vector<std::uint64_t> out;
    for_each_prime(lo, hi, [&](std::uint64_t p) {
        out.push_back(p);
        return true;
    });
    return out;
}

std::string to_string_u128(u128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v) {
        s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    return {s.rbegin(), s.rend()};
}

u128 parse_u128(const std::string& s) {
    if (s.empty()) throw UsageError("parse_u128: empty string");
    u128 v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') throw UsageError("parse_u128: not a decimal integer: " + s);
        const u128 next = v * 10 + static_cast<unsigned>(c - '0');
        if (next / 10 != v) throw UsageError("parse_u128: overflow: " + s);
        v = next;
    }
    return v;
}

} // namespace niceldc
