#pragma once

// Uniform element arithmetic over BinaryField (any t) and SmallField (t <= 32),
// so the orbit scans and discrete logs are written once.

#include <cstdint>
#include <optional>
#include <unordered_map>

#include "niceldc/binary_field.hpp"

namespace niceldc::detail {

struct BigEngine {
    using Elem = Gf2Poly;
    using Hash = Gf2PolyHash;

    const BinaryField& field;

    Elem one() const { return Gf2Poly::one(); }
    Elem mul(const Elem& a, const Elem& b) const { return field.mul(a, b); }
    Elem pow(const Elem& a, std::uint64_t e) const { return field.pow(a, e); }
    static Elem plus_one(Elem a) {
        a.flip_coeff(0);
        return a;
    }
    static bool is_one(const Elem& a) { return a.is_one(); }
};

struct SmallEngine {
    using Elem = std::uint64_t;
    using Hash = std::hash<std::uint64_t>;

    SmallField field;

    Elem one() const { return 1; }
    Elem mul(Elem a, Elem b) const { return field.mul(a, b); }
    Elem pow(Elem a, std::uint64_t e) const { return field.pow(a, e); }
    static Elem plus_one(Elem a) { return a ^ 1u; }
    static bool is_one(Elem a) { return a == 1; }
};

/// Baby-step giant-step table for a fixed g of prime order p.
template <typename E>
class DlogTable {
public:
    DlogTable(const E& eng, typename E::Elem g, std::uint64_t p, std::uint64_t baby_steps)
        : eng_(eng), p_(p), m_(std::min<std::uint64_t>(std::max<std::uint64_t>(baby_steps, 1), p)) {
        table_.reserve(m_ * 2);
        typename E::Elem cur = eng_.one();
        for (std::uint64_t j = 0; j < m_; ++j) {
            table_.emplace(cur, j);
            cur = eng_.mul(cur, g);
        }
        giant_ = eng_.pow(g, p_ - (m_ % p_)); // g^(-m)
    }

    std::optional<std::uint64_t> operator()(typename E::Elem h) const {
        const std::uint64_t rounds = p_ / m_ + 1;
        for (std::uint64_t i = 0; i <= rounds; ++i) {
            if (auto it = table_.find(h); it != table_.end()) return (i * m_ + it->second) % p_;
            h = eng_.mul(h, giant_);
        }
        return std::nullopt;
    }

private:
    const E& eng_;
    std::uint64_t p_;
    std::uint64_t m_;
    typename E::Elem giant_;
    std::unordered_map<typename E::Elem, std::uint64_t, typename E::Hash> table_;
};

/// Visits one representative i of every class {+-i * 2^j mod p}, in
/// increasing order, with zeta = g^i and whether zeta + 1 lies in C_p.
/// visit(i, zeta, hit) returns false to stop. Returns the number of classes seen.
template <typename E, typename Visit>
std::uint64_t scan_classes(const E& eng, const typename E::Elem& g, std::uint64_t p, Visit&& visit) {
    std::vector<std::uint64_t> marks((p + 63) / 64, 0);
    auto mark_orbit = [&](std::uint64_t i) {
        std::uint64_t j = i;
        do {
            marks[j / 64] |= std::uint64_t{1} << (j % 64);
            j = (2 * j) % p;
        } while (j != i);
    };
    std::uint64_t classes = 0;
    std::uint64_t last = 0;
    typename E::Elem zeta = eng.one();
    for (std::uint64_t i = 1; i < p; ++i) {
        if ((marks[i / 64] >> (i % 64)) & 1u) continue;
        mark_orbit(i);
        if (!((marks[(p - i) / 64] >> ((p - i) % 64)) & 1u)) mark_orbit(p - i);
        ++classes;
        zeta = eng.mul(zeta, eng.pow(g, i - last));
        last = i;
        const bool hit = E::is_one(eng.pow(E::plus_one(zeta), p));
        if (!visit(i, zeta, hit)) break;
    }
    return classes;
}

} // namespace niceldc::detail
