#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace surrokit {

// All randomness in the toolkit flows through these helpers on top of
// std::mt19937_64. The engine itself is fully specified by the standard;
// the helpers replace std::uniform_*_distribution, whose output is
// implementation-defined, so seeded runs reproduce bit-for-bit across
// standard libraries.

// Uniform double in [0, 1), 53-bit resolution.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform double in (0, 1].
inline double uniform01_open_low(std::mt19937_64& rng) {
    return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
}

inline double uniform_real(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

// Uniform index in [0, n). n must be positive.
inline std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
    std::size_t i = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n));
    return i < n ? i : n - 1;
}

// Fisher-Yates, written out so shuffles do not depend on std::shuffle's
// unspecified consumption pattern.
template <typename T>
void shuffle(std::vector<T>& values, std::mt19937_64& rng) {
    if (values.size() < 2) return;
    for (std::size_t i = values.size() - 1; i > 0; --i) {
        std::size_t j = uniform_index(rng, i + 1);
        std::swap(values[i], values[j]);
    }
}

// splitmix64 mix; derives independent child streams (per topology, per seed
// index, per shard) from one base seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace surrokit
