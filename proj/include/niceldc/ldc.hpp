#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "niceldc/nicesets.hpp"

namespace niceldc {

/// Packed bit array; bit i is bit (i % 64) of word (i / 64).
class BitArray {
public:
    BitArray() = default;
    explicit BitArray(std::uint64_t size) : size_(size), words_((size + 63) / 64, 0) {}

    std::uint64_t size() const noexcept { return size_; }
    bool get(std::uint64_t i) const noexcept { return (words_[i / 64] >> (i % 64)) & 1u; }
    void set(std::uint64_t i, bool v) noexcept {
        const auto mask = std::uint64_t{1} << (i % 64);
        words_[i / 64] = v ? (words_[i / 64] | mask) : (words_[i / 64] & ~mask);
    }
    void flip(std::uint64_t i) noexcept { words_[i / 64] ^= std::uint64_t{1} << (i % 64); }
    std::uint64_t weight() const noexcept;

    std::vector<std::uint64_t>& words() noexcept { return words_; }
    const std::vector<std::uint64_t>& words() const noexcept { return words_; }

    BitArray& operator^=(const BitArray& rhs);
    friend BitArray operator^(BitArray a, const BitArray& b) { return a ^= b; }
    friend bool operator==(const BitArray&, const BitArray&) = default;

private:
    std::uint64_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

using Message = std::vector<std::uint8_t>; // one 0/1 entry per message bit

struct LdcParams {
    std::uint64_t p = 0;
    std::size_t m = 0;
    MatchingFamily family;
    AlgebraicNicePair nice;
    std::uint64_t length = 0; // N = p^m

    std::size_t n() const noexcept { return family.n(); }
    std::size_t k() const noexcept { return nice.s1.size(); }

    /// Checks the family against <2>, the pair, shared p, nonzero u_i and
    /// N <= max_length. Throws UsageError or ResourceLimitError.
    static LdcParams make(MatchingFamily family, AlgebraicNicePair nice, std::uint64_t max_length = 1ULL << 28);
};

/// Mixed radix, least significant coordinate first.
std::uint64_t point_to_index(const ZpVector& w, std::uint64_t p);
ZpVector index_to_point(std::uint64_t index, std::uint64_t p, std::size_t m);

/// Bit w is the parity of #{j : x_j = 1 and (u_j, w) in S0}.
BitArray encode(const LdcParams& params, const Message& x);

struct DecodeTrace {
    ZpVector w;
    std::vector<std::uint64_t> positions; // w + lambda v_i for lambda in S1, in S1 order
    bool bit = false;
};

/// Decoder run with a fixed w; requires (u_i, w) in S0. Indices are 0-based.
DecodeTrace decode_at(const LdcParams& params, const BitArray& y, std::size_t i, const ZpVector& w);

/// Samples w uniformly with (u_i, w) in S0 by rejection, then decodes.
DecodeTrace decode_bit(const LdcParams& params, const BitArray& y, std::size_t i, std::uint64_t seed);

enum class CorruptionMode { random, greedy };

/// floor(delta N) flipped positions: uniform distinct positions, or (greedy)
/// the positions the decoder for `target` queries most, lowest index first.
BitArray corrupt(const LdcParams& params, const BitArray& y, double delta, CorruptionMode mode, std::uint64_t seed,
                 std::size_t target = 0);

std::uint64_t flip_count(std::uint64_t length, double delta);

struct SimulationReport {
    double delta = 0;
    std::uint64_t trials = 0;
    std::uint64_t errors = 0;
    double rate = 0;
    double bound = 0; // 2 k delta
    double slack = 0; // 4 sigma of a binomial at the bound
    bool violated = false;
    bool vacuous = false; // bound >= 1
};

SimulationReport simulate(const LdcParams& params, double delta, std::uint64_t trials, std::uint64_t seed,
                          CorruptionMode mode = CorruptionMode::random);

/// `delta,trials,errors,rate,bound,violated`
void write_simulation_csv(std::ostream& os, const std::vector<SimulationReport>& rows);

struct SmoothnessStats {
    std::size_t index = 0;
    std::uint64_t t_size = 0;         // |T_i|
    std::uint64_t valid_w = 0;        // decoder coins enumerated
    std::uint64_t per_position = 0;   // common count on T_i when flat
    std::uint64_t outside_hits = 0;   // queries landing outside T_i
    bool flat = false;
    std::vector<std::uint32_t> histogram; // queries per position
};

/// Exhaustive tally of the decoder's queries for message index i.
SmoothnessStats smoothness_stats(const LdcParams& params, std::size_t i);

/// Header line `p m n |S0| |S1|`, then ceil(N/8) raw bytes, bit i in byte i/8 at bit i%8.
void write_codeword(std::ostream& os, const LdcParams& params, const BitArray& y);

struct CodewordHeader {
    std::uint64_t p = 0, m = 0, n = 0, s0 = 0, s1 = 0;
};
BitArray read_codeword(std::istream& is, CodewordHeader* header = nullptr);

} // namespace niceldc
