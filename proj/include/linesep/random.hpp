#pragma once

// Seeded randomness with results that do not depend on the standard library
// implementation (std distributions are implementation-defined).

#include <cstdint>
#include <random>

namespace linesep {

using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seed of trial `trial` within a study seeded by `seed`.
constexpr std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
    return seed ^ splitmix64(trial);
}

// Uniform integer in [0, bound), bound >= 1 (Lemire's rejection method).
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
    unsigned __int128 m = static_cast<unsigned __int128>(rng()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        std::uint64_t threshold = -bound % bound;
        while (low < threshold) {
            m = static_cast<unsigned __int128>(rng()) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace linesep
