#include "bpgd/noise.hpp"

#include <stdexcept>

#include "bpgd/rng.hpp"

namespace bpgd {

BitVector sample_bitflip(double p, std::size_t n, std::mt19937_64& rng) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("sample_bitflip: probability must be in (0, 1)");
    BitVector e(n);
    for (std::size_t i = 0; i < n; ++i)
        if (uniform_unit(rng) < p) e.set(i, true);
    return e;
}

std::vector<std::uint8_t> sample_depolarizing(double p, std::size_t n, std::mt19937_64& rng) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("sample_depolarizing: probability must be in (0, 1)");
    std::vector<std::uint8_t> q(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        double u = uniform_unit(rng);
        if (u < p) {
            int s = 1 + static_cast<int>(u / (p / 3.0));
            if (s > 3) s = 3;  // guard the u == p boundary in floating point
            q[i] = static_cast<std::uint8_t>(s);
        }
    }
    return q;
}

}  // namespace bpgd
