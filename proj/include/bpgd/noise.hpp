#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "bpgd/gf2.hpp"

namespace bpgd {

enum class NoiseKind : std::uint8_t { BitFlip = 0, Depolarizing = 1 };

struct NoiseModel {
    NoiseKind kind = NoiseKind::BitFlip;
    double p = 0.0;  // must be in (0, 1)
};

// Independent flips: bit i set with probability p. One uniform draw per bit.
BitVector sample_bitflip(double p, std::size_t n, std::mt19937_64& rng);

// Independent depolarizing: symbol 0 (I) with probability 1-p, each of X/Y/Z
// with probability p/3. One uniform draw per qubit.
std::vector<std::uint8_t> sample_depolarizing(double p, std::size_t n, std::mt19937_64& rng);

}  // namespace bpgd
