#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace holovote {

// All randomness flows through std::mt19937_64 plus the helpers below, never
// through std::uniform_*_distribution, whose output is implementation-defined.
// Results are therefore reproducible across standard libraries.

/// SplitMix64 finalizer; a bijection on 64-bit integers.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Derives an independent seed for sub-stream `stream` of `base`.
/// Injective in `stream` for a fixed base, so derived seeds never collide.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    return mix64(base ^ (0x9e3779b97f4a7c15ull * (stream + 1)));
}

/// Uniform draw from [0, bound) by rejection; unbiased. bound must be > 0.
inline std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t bound) {
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % bound;
    std::uint64_t x = gen();
    while (x >= limit)
        x = gen();
    return x % bound;
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

} // namespace holovote
