#pragma once

#include <cstdint>
#include <random>

namespace niceldc {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed for a sub-task, a pure function of the parent seed and a tag
/// (a prime, a trial index, ...), so results never depend on scheduling.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    return splitmix64(splitmix64(seed) ^ (tag * 0xd6e8feb86659fd93ULL));
}

inline Rng make_rng(std::uint64_t seed, std::uint64_t tag) {
    return Rng(derive_seed(seed, tag));
}

} // namespace niceldc
