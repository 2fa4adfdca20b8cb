#include "niceldc/gf2poly.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdio>
#include <utility>

#include "niceldc/errors.hpp"

#if defined(__PCLMUL__) && defined(__SSE4_1__)
#include <immintrin.h>
#define NICELDC_HW_CLMUL 1
#endif
#if defined(__BMI2__)
#include <immintrin.h>
#define NICELDC_HW_PDEP 1
#endif

namespace niceldc {

using Word = Gf2Poly::Word;
using u128x = unsigned __int128;

namespace detail {

bool hardware_clmul() noexcept {
#ifdef NICELDC_HW_CLMUL
    return true;
#else
    return false;
#endif
}

void clmul64(std::uint64_t a, std::uint64_t b, std::uint64_t& lo, std::uint64_t& hi) noexcept {
#ifdef NICELDC_HW_CLMUL
    const __m128i r = _mm_clmulepi64_si128(_mm_cvtsi64_si128(static_cast<long long>(a)),
                                           _mm_cvtsi64_si128(static_cast<long long>(b)), 0);
    lo = static_cast<std::uint64_t>(_mm_cvtsi128_si64(r));
    hi = static_cast<std::uint64_t>(_mm_extract_epi64(r, 1));
#else
    // 4-bit window over b; table entries carry up to 3 overflow bits.
    std::uint64_t tlo[16];
    std::uint64_t thi[16];
    tlo[0] = 0;
    thi[0] = 0;
    for (unsigned k = 1; k < 16; ++k) {
        const unsigned top = std::bit_width(k) - 1;
        const unsigned rest = k ^ (1u << top);
        tlo[k] = tlo[rest] ^ (a << top);
        thi[k] = thi[rest] ^ (top ? a >> (64 - top) : 0);
    }
    lo = 0;
    hi = 0;
    for (int shift = 60; shift >= 0; shift -= 4) {
        hi = (hi << 4) | (lo >> 60);
        lo <<= 4;
        const unsigned k = static_cast<unsigned>((b >> shift) & 15u);
        lo ^= tlo[k];
        hi ^= thi[k];
    }
#endif
}

namespace {

constexpr std::size_t kKaratsubaThreshold = 24;

void schoolbook(const Word* a, std::size_t na, const Word* b, std::size_t nb, Word* out) {
    for (std::size_t i = 0; i < na; ++i) {
        const Word ai = a[i];
        if (ai == 0) continue;
        for (std::size_t j = 0; j < nb; ++j) {
            Word lo;
            Word hi;
            clmul64(ai, b[j], lo, hi);
            out[i + j] ^= lo;
            out[i + j + 1] ^= hi;
        }
    }
}

// out[0 .. 2n) ^= a * b for equal-length operands.
void karatsuba(const Word* a, const Word* b, std::size_t n, Word* out) {
    if (n < kKaratsubaThreshold) {
        schoolbook(a, n, b, n, out);
        return;
    }
    const std::size_t lo = n / 2;
    const std::size_t hi = n - lo;
    std::vector<Word> z0(2 * lo, 0);
    std::vector<Word> z2(2 * hi, 0);
    std::vector<Word> z1(2 * hi, 0);
    std::vector<Word> sa(hi, 0);
    std::vector<Word> sb(hi, 0);
    karatsuba(a, b, lo, z0.data());
    karatsuba(a + lo, b + lo, hi, z2.data());
    for (std::size_t i = 0; i < hi; ++i) {
        sa[i] = a[lo + i] ^ (i < lo ? a[i] : 0);
        sb[i] = b[lo + i] ^ (i < lo ? b[i] : 0);
    }
    karatsuba(sa.data(), sb.data(), hi, z1.data());
    for (std::size_t i = 0; i < z0.size(); ++i) z1[i] ^= z0[i];
    for (std::size_t i = 0; i < z2.size(); ++i) z1[i] ^= z2[i];
    for (std::size_t i = 0; i < z0.size(); ++i) out[i] ^= z0[i];
    for (std::size_t i = 0; i < z2.size(); ++i) out[2 * lo + i] ^= z2[i];
    for (std::size_t i = 0; i < z1.size(); ++i) out[lo + i] ^= z1[i];
}

} // namespace

void mul_words(const Word* a, std::size_t na, const Word* b, std::size_t nb, Word* out) {
    std::fill(out, out + na + nb, Word{0});
    if (na == 0 || nb == 0) return;
    if (na < nb) {
        std::swap(a, b);
        std::swap(na, nb);
    }
    if (nb < kKaratsubaThreshold) {
        schoolbook(a, na, b, nb, out);
        return;
    }
    // Chunk the longer operand into pieces as long as the shorter one.
    std::vector<Word> piece(nb, 0);
    for (std::size_t off = 0; off < na; off += nb) {
        const std::size_t len = std::min(nb, na - off);
        if (len == nb) {
            karatsuba(a + off, b, nb, out + off);
        } else {
            std::fill(piece.begin(), piece.end(), Word{0});
            std::copy(a + off, a + off + len, piece.begin());
            std::vector<Word> tmp(2 * nb, 0);
            karatsuba(piece.data(), b, nb, tmp.data());
            for (std::size_t i = 0; i < len + nb; ++i) out[off + i] ^= tmp[i];
        }
    }
}

} // namespace detail

namespace {

inline std::uint64_t spread32(std::uint32_t v) {
#ifdef NICELDC_HW_PDEP
    return _pdep_u64(v, 0x5555555555555555ULL);
#else
    std::uint64_t x = v;
    x = (x | (x << 16)) & 0x0000FFFF0000FFFFULL;
    x = (x | (x << 8)) & 0x00FF00FF00FF00FFULL;
    x = (x | (x << 4)) & 0x0F0F0F0F0F0F0F0FULL;
    x = (x | (x << 2)) & 0x3333333333333333ULL;
    x = (x | (x << 1)) & 0x5555555555555555ULL;
    return x;
#endif
}

std::int64_t top_degree(const std::vector<Word>& w, std::int64_t from) {
    // Highest set bit at index <= from, or kZeroDegree.
    if (from < 0) return kZeroDegree;
    std::int64_t wi = from / 64;
    Word mask = (from % 64 == 63) ? ~Word{0} : ((Word{1} << (from % 64 + 1)) - 1);
    Word cur = w[static_cast<std::size_t>(wi)] & mask;
    while (cur == 0) {
        if (--wi < 0) return kZeroDegree;
        cur = w[static_cast<std::size_t>(wi)];
    }
    return wi * 64 + (63 - std::countl_zero(cur));
}

// dst ^= src * x^shift; dst must be long enough.
inline void xor_shifted(Word* dst, std::span<const Word> src, std::uint64_t shift) {
    const std::size_t ws = shift / 64;
    const unsigned bs = shift % 64;
    Word* d = dst + ws;
    if (bs == 0) {
        for (std::size_t i = 0; i < src.size(); ++i) d[i] ^= src[i];
        return;
    }
    Word carry = 0;
    for (std::size_t i = 0; i < src.size(); ++i) {
        d[i] ^= (src[i] << bs) | carry;
        carry = src[i] >> (64 - bs);
    }
    if (carry) d[src.size()] ^= carry;
}

// Reduces w in place modulo b (nonzero); optionally records the quotient.
void reduce_words(std::vector<Word>& w, const Gf2Poly& b, std::vector<Word>* quotient) {
    const std::int64_t db = b.degree();
    std::int64_t da = w.empty() ? kZeroDegree : top_degree(w, static_cast<std::int64_t>(w.size()) * 64 - 1);
    if (quotient) {
        quotient->assign(da >= db ? static_cast<std::size_t>((da - db) / 64 + 1) : 0, 0);
    }
    w.push_back(0); // room for the carry word of xor_shifted
    while (da != kZeroDegree && da >= db) {
        const auto s = static_cast<std::uint64_t>(da - db);
        xor_shifted(w.data(), b.words(), s);
        if (quotient) (*quotient)[s / 64] |= Word{1} << (s % 64);
        da = top_degree(w, da - 1);
    }
}

} // namespace

Gf2Poly::Gf2Poly(std::vector<Word> words) : words_(std::move(words)) { trim(); }

void Gf2Poly::trim() noexcept {
    while (!words_.empty() && words_.back() == 0) words_.pop_back();
}

Gf2Poly Gf2Poly::one() { return Gf2Poly(std::vector<Word>{1}); }
Gf2Poly Gf2Poly::x() { return Gf2Poly(std::vector<Word>{2}); }

Gf2Poly Gf2Poly::monomial(std::uint64_t exponent) {
    Gf2Poly f;
    f.set_coeff(exponent, true);
    return f;
}

Gf2Poly Gf2Poly::from_uint(std::uint64_t bits) { return Gf2Poly(std::vector<Word>{bits}); }

Gf2Poly Gf2Poly::from_exponents(std::span<const std::uint64_t> exponents) {
    Gf2Poly f;
    for (auto e : exponents) f.flip_coeff(e);
    return f;
}

Gf2Poly Gf2Poly::from_hex(std::string_view hex) {
    if (hex == "0") return {};
    if (hex.empty() || hex.size() % 16 != 0) {
        throw UsageError("Gf2Poly::from_hex: expected 16 hex digits per word");
    }
    std::vector<Word> words;
    for (std::size_t off = 0; off < hex.size(); off += 16) {
        Word w = 0;
        for (std::size_t i = 0; i < 16; ++i) {
            const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(hex[off + i])));
            unsigned v;
            if (c >= '0' && c <= '9') {
                v = static_cast<unsigned>(c - '0');
            } else if (c >= 'a' && c <= 'f') {
                v = static_cast<unsigned>(c - 'a' + 10);
            } else {
                throw UsageError("Gf2Poly::from_hex: bad digit");
            }
            w = (w << 4) | v;
        }
        words.push_back(w);
    }
    return Gf2Poly(std::move(words));
}

std::int64_t Gf2Poly::degree() const noexcept {
    if (words_.empty()) return kZeroDegree;
    return static_cast<std::int64_t>(words_.size() - 1) * 64 + (63 - std::countl_zero(words_.back()));
}

bool Gf2Poly::coeff(std::uint64_t i) const noexcept {
    const std::size_t w = i / 64;
    return w < words_.size() && ((words_[w] >> (i % 64)) & 1u);
}

void Gf2Poly::set_coeff(std::uint64_t i, bool value) {
    if (coeff(i) != value) flip_coeff(i);
}

void Gf2Poly::flip_coeff(std::uint64_t i) {
    const std::size_t w = i / 64;
    if (w >= words_.size()) words_.resize(w + 1, 0);
    words_[w] ^= Word{1} << (i % 64);
    trim();
}

std::size_t Gf2Poly::weight() const noexcept {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

std::vector<std::uint64_t> Gf2Poly::support() const {
    std::vector<std::uint64_t> out;
    for (std::size_t i = 0; i < words_.size(); ++i) {
        Word w = words_[i];
        while (w) {
            out.push_back(i * 64 + static_cast<std::uint64_t>(std::countr_zero(w)));
            w &= w - 1;
        }
    }
    return out;
}

Gf2Poly& Gf2Poly::operator+=(const Gf2Poly& rhs) {
    if (rhs.words_.size() > words_.size()) words_.resize(rhs.words_.size(), 0);
    for (std::size_t i = 0; i < rhs.words_.size(); ++i) words_[i] ^= rhs.words_[i];
    trim();
    return *this;
}

Gf2Poly operator*(const Gf2Poly& lhs, const Gf2Poly& rhs) {
    if (lhs.is_zero() || rhs.is_zero()) return {};
    std::vector<Word> out(lhs.words_.size() + rhs.words_.size());
    detail::mul_words(lhs.words_.data(), lhs.words_.size(), rhs.words_.data(), rhs.words_.size(), out.data());
    return Gf2Poly(std::move(out));
}

Gf2Poly& Gf2Poly::operator*=(const Gf2Poly& rhs) { return *this = *this * rhs; }

Gf2Poly Gf2Poly::shifted_up(std::uint64_t n) const {
    if (is_zero()) return {};
    std::vector<Word> out(words_.size() + n / 64 + 1, 0);
    xor_shifted(out.data(), words_, n);
    return Gf2Poly(std::move(out));
}

Gf2Poly Gf2Poly::shifted_down(std::uint64_t n) const {
    const std::size_t ws = n / 64;
    const unsigned bs = n % 64;
    if (ws >= words_.size()) return {};
    std::vector<Word> out(words_.size() - ws);
    for (std::size_t i = 0; i < out.size(); ++i) {
        Word v = words_[i + ws] >> bs;
        if (bs && i + ws + 1 < words_.size()) v |= words_[i + ws + 1] << (64 - bs);
        out[i] = v;
    }
    return Gf2Poly(std::move(out));
}

Gf2Poly Gf2Poly::truncated(std::uint64_t n) const {
    const std::size_t full = n / 64;
    if (full >= words_.size()) return *this;
    std::vector<Word> out(words_.begin(), words_.begin() + static_cast<std::ptrdiff_t>(full));
    if (n % 64) out.push_back(words_[full] & ((Word{1} << (n % 64)) - 1));
    return Gf2Poly(std::move(out));
}

Gf2Poly Gf2Poly::square() const {
    std::vector<Word> out(2 * words_.size());
    for (std::size_t i = 0; i < words_.size(); ++i) {
        out[2 * i] = spread32(static_cast<std::uint32_t>(words_[i]));
        out[2 * i + 1] = spread32(static_cast<std::uint32_t>(words_[i] >> 32));
    }
    return Gf2Poly(std::move(out));
}

std::string Gf2Poly::to_hex() const {
    if (is_zero()) return "0";
    std::string out;
    out.reserve(words_.size() * 16);
    char buf[17];
    for (auto w : words_) {
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(w));
        out += buf;
    }
    return out;
}

std::string Gf2Poly::to_string() const {
    if (is_zero()) return "0";
    std::string out;
    auto exps = support();
    for (auto it = exps.rbegin(); it != exps.rend(); ++it) {
        if (!out.empty()) out += " + ";
        if (*it == 0) {
            out += "1";
        } else if (*it == 1) {
            out += "x";
        } else {
            out += "x^" + std::to_string(*it);
        }
    }
    return out;
}

Gf2DivMod poly_divmod(const Gf2Poly& a, const Gf2Poly& b) {
    if (b.is_zero()) throw UsageError("poly_divmod: division by the zero polynomial");
    std::vector<Word> w(a.words().begin(), a.words().end());
    std::vector<Word> q;
    reduce_words(w, b, &q);
    return {Gf2Poly(std::move(q)), Gf2Poly(std::move(w))};
}

Gf2Poly poly_mod(Gf2Poly a, const Gf2Poly& b) {
    if (b.is_zero()) throw UsageError("poly_mod: division by the zero polynomial");
    if (a.degree() < b.degree()) return a;
    std::vector<Word> w(a.words().begin(), a.words().end());
    reduce_words(w, b, nullptr);
    return Gf2Poly(std::move(w));
}

namespace {

constexpr std::int64_t kLehmerMinDegree = 2048;

inline u128x window128(const std::vector<Word>& w, std::int64_t s) {
    // Bits [s, s + 128) of w.
    const auto wi = static_cast<std::size_t>(s / 64);
    const unsigned bs = static_cast<unsigned>(s % 64);
    auto at = [&](std::size_t i) { return i < w.size() ? w[i] : Word{0}; };
    const Word w0 = at(wi), w1 = at(wi + 1), w2 = at(wi + 2);
    const Word lo = bs ? (w0 >> bs) | (w1 << (64 - bs)) : w0;
    const Word hi = bs ? (w1 >> bs) | (w2 << (64 - bs)) : w1;
    return (u128x{hi} << 64) | lo;
}

inline int deg128(u128x v) {
    const auto hi = static_cast<Word>(v >> 64);
    if (hi) return 127 - std::countl_zero(hi);
    const auto lo = static_cast<Word>(v);
    return lo ? 63 - std::countl_zero(lo) : -1;
}

void trim_words(std::vector<Word>& w) {
    while (!w.empty() && w.back() == 0) w.pop_back();
}

std::int64_t words_degree(const std::vector<Word>& w) {
    return w.empty() ? kZeroDegree : static_cast<std::int64_t>(w.size() - 1) * 64 + 63 - std::countl_zero(w.back());
}

// (oa, ob) = (u0 a + v0 b, u1 a + v1 b) for single-word polynomials.
void apply_matrix(Word u0, Word v0, Word u1, Word v1, const std::vector<Word>& a, const std::vector<Word>& b,
                  std::vector<Word>& oa, std::vector<Word>& ob) {
    const std::size_t n = std::max(a.size(), b.size());
    oa.resize(n + 1);
    ob.resize(n + 1);
    Word ca = 0, cb = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const Word ai = i < a.size() ? a[i] : 0;
        const Word bi = i < b.size() ? b[i] : 0;
        Word l0, h0, l1, h1, l2, h2, l3, h3;
        detail::clmul64(u0, ai, l0, h0);
        detail::clmul64(v0, bi, l1, h1);
        detail::clmul64(u1, ai, l2, h2);
        detail::clmul64(v1, bi, l3, h3);
        oa[i] = l0 ^ l1 ^ ca;
        ob[i] = l2 ^ l3 ^ cb;
        ca = h0 ^ h1;
        cb = h2 ^ h3;
    }
    oa[n] = ca;
    ob[n] = cb;
    trim_words(oa);
    trim_words(ob);
}

// Lehmer-style Euclid: runs the remainder sequence on the leading 128 bits,
// collecting the quotients that provably agree with the full-precision ones
// into a 2x2 matrix of single-word polynomials, then applies the matrix to the
// full operands. Each pass strips about 64 bits from both operands.
Gf2Poly lehmer_gcd(std::vector<Word> a, std::vector<Word> b) {
    std::vector<Word> na, nb;
    trim_words(a);
    trim_words(b);
    for (;;) {
        std::int64_t da = words_degree(a), db = words_degree(b);
        if (da < db) {
            std::swap(a, b);
            std::swap(da, db);
        }
        if (db == kZeroDegree) return Gf2Poly(std::move(a));
        if (da < kLehmerMinDegree) break;

        const std::int64_t s = da - 127;
        u128x r0 = window128(a, s), r1 = window128(b, s);
        Word u0 = 1, v0 = 0, u1 = 0, v1 = 1;
        int cof = 0; // degree bound of the (u1, v1) row
        bool stepped = false;
        for (;;) {
            const int d0 = deg128(r0), d1 = deg128(r1);
            if (d1 < 0) break;
            const int dq = d0 - d1;
            if (d1 - dq < cof || dq > 63) break;
            Word q = 0;
            u128x r = r0;
            for (int k = dq; k >= 0; --k) {
                if ((r >> (d1 + k)) & 1u) {
                    r ^= r1 << k;
                    q |= Word{1} << k;
                }
            }
            Word lo, hi;
            detail::clmul64(q, u1, lo, hi);
            const Word u2 = u0 ^ lo;
            detail::clmul64(q, v1, lo, hi);
            const Word v2 = v0 ^ lo;
            r0 = r1;
            r1 = r;
            u0 = u1;
            v0 = v1;
            u1 = u2;
            v1 = v2;
            cof += dq;
            stepped = true;
        }
        if (!stepped) {
            reduce_words(a, Gf2Poly(std::vector<Word>(b)), nullptr);
            trim_words(a);
            continue;
        }
        apply_matrix(u0, v0, u1, v1, a, b, na, nb);
        std::swap(a, na);
        std::swap(b, nb);
    }
    Gf2Poly x(std::move(a)), y(std::move(b));
    while (!y.is_zero()) {
        x = poly_mod(std::move(x), y);
        std::swap(x, y);
    }
    return x;
}

} // namespace

Gf2Poly poly_gcd(Gf2Poly a, Gf2Poly b) {
    if (std::max(a.degree(), b.degree()) >= kLehmerMinDegree && !a.is_zero() && !b.is_zero()) {
        return lehmer_gcd({a.words().begin(), a.words().end()}, {b.words().begin(), b.words().end()});
    }
    while (!b.is_zero()) {
        a = poly_mod(std::move(a), b);
        std::swap(a, b);
    }
    return a;
}

Gf2Poly poly_powmod(const Gf2Poly& base, std::uint64_t e, const Gf2Poly& modulus) {
    if (modulus.degree() < 1) throw UsageError("poly_powmod: modulus must be nonconstant");
    return Gf2Reducer(modulus).pow(base, e);
}

Gf2Poly poly_reciprocal(const Gf2Poly& f) {
    if (f.is_zero()) return {};
    const auto d = static_cast<std::uint64_t>(f.degree());
    Gf2Poly r;
    for (auto e : f.support()) r.flip_coeff(d - e);
    return r;
}

bool is_irreducible(const Gf2Poly& f) {
    const std::int64_t d = f.degree();
    if (d < 1) return false;
    if (d == 1) return true;
    if (!f.coeff(0)) return false; // divisible by x
    const Gf2Reducer red(f);
    const Gf2Poly x = Gf2Poly::x();
    Gf2Poly u = x;
    for (std::int64_t i = 1; i <= d / 2; ++i) {
        u = red.sqr(u);
        if (!poly_gcd(f, u + x).is_one()) return false;
    }
    return true;
}

Gf2Reducer::Gf2Reducer(Gf2Poly modulus) : modulus_(std::move(modulus)), degree_(modulus_.degree()) {
    if (degree_ < 1) throw UsageError("Gf2Reducer: modulus must be nonconstant");
    mu_ = poly_divmod(Gf2Poly::monomial(static_cast<std::uint64_t>(2 * degree_)), modulus_).quotient;
}

Gf2Poly Gf2Reducer::reduce(Gf2Poly a) const {
    const std::int64_t da = a.degree();
    if (da < degree_) return a;
    if (da >= 2 * degree_) return poly_mod(std::move(a), modulus_);
    const auto d = static_cast<std::uint64_t>(degree_);
    const Gf2Poly q = (a.shifted_down(d) * mu_).shifted_down(d);
    a += q * modulus_;
    return a;
}

Gf2Poly Gf2Reducer::pow(const Gf2Poly& base, std::uint64_t e) const {
    const std::uint64_t words[1] = {e};
    return pow(base, std::span<const std::uint64_t>(words, 1));
}

Gf2Poly Gf2Reducer::pow(const Gf2Poly& base, std::span<const std::uint64_t> exponent) const {
    std::size_t top = exponent.size();
    while (top > 0 && exponent[top - 1] == 0) --top;
    Gf2Poly result = reduce(Gf2Poly::one());
    if (top == 0) return result;
    const Gf2Poly b = reduce(base);
    for (std::size_t wi = top; wi-- > 0;) {
        const std::uint64_t w = exponent[wi];
        const int start = (wi == top - 1) ? 63 - std::countl_zero(w) : 63;
        for (int bit = start; bit >= 0; --bit) {
            result = sqr(result);
            if ((w >> bit) & 1u) result = mul(result, b);
        }
    }
    return result;
}

} // namespace niceldc
