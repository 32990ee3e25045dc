#pragma once

#include <cstdint>
#include <random>

// Deterministic RNG helpers. Streams are derived by counter-based splitting so
// that (master seed, trial index) alone fixes every draw, independent of how
// trials are scheduled across workers. Raw engine words are converted with
// fixed arithmetic (no std::*_distribution) so sequences are stable across
// standard library implementations.

namespace bpgd {

// SplitMix64 finalizer; good avalanche, standard constants.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, std::uint64_t stream) {
    return mix64(mix64(master ^ 0x6a09e667f3bcc909ull) + index * 0x9e3779b97f4a7c15ull + stream);
}

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(mix64(seed)); }

// Uniform double in [0, 1) from the top 53 bits.
inline double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Unbiased uniform integer in [0, n); n must be positive. Mask-and-reject.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
    std::uint64_t mask = n - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    for (;;) {
        std::uint64_t r = rng() & mask;
        if (r < n) return r;
    }
}

}  // namespace bpgd
