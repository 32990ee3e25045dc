#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "bpgd/bp.hpp"
#include "bpgd/css.hpp"

// Guided decimation around the binary BP engine. Each round runs BP for T
// iterations on warm messages; on non-convergence the most reliable
// undecimated variable (largest |bias|) has its prior replaced by a saturated
// value matching the bias sign, freezing the decision for later rounds.

namespace bpgd {

struct GdConfig {
    int T = 10;               // BP iterations per round
    int R = 0;                // round budget; 0 means "use n"
    double llr_max = 25.0;    // saturated prior magnitude for decimated variables
    double gamma_prime = 1.0; // randomized selection window width
    std::uint64_t seed = 0;   // randomized selection seed
    BpConfig bp;              // variant / alpha / K for the inner engine
};

struct GdResult {
    bool converged = false;
    BitVector estimate;  // valid iff converged
    int rounds_used = 0;
    // (variable index, assigned bit) in decimation order; on convergence at
    // round r it has r-1 entries, on non-convergence one per round.
    std::vector<std::pair<std::int32_t, std::uint8_t>> trace;
};

// Deterministic selection: argmax |bias| over undecimated variables, ties to
// the lowest index.
GdResult bpgd_decode(const TannerGraph& graph, const BitVector& syndrome,
                     std::span<const double> priors, const GdConfig& cfg);

// Randomized selection: uniform draw from {v undecimated : gamma(v) >=
// gamma_max - gamma_prime} using the config seed.
GdResult bpgd_rd_decode(const TannerGraph& graph, const BitVector& syndrome,
                        std::span<const double> priors, const GdConfig& cfg);

// Exposes the engine for inspection (tests assert prior saturation and trace
// bookkeeping). Free functions above are thin wrappers.
class GuidedDecimation {
public:
    GuidedDecimation(const TannerGraph& graph, const GdConfig& cfg);
    GdResult run(const BitVector& syndrome, std::span<const double> priors, bool randomized);
    const BpEngine& engine() const { return engine_; }

private:
    std::size_t select_deterministic() const;
    std::size_t select_randomized(std::mt19937_64& rng) const;

    const TannerGraph& graph_;
    GdConfig cfg_;
    BpEngine engine_;
    std::vector<std::uint8_t> decimated_;
};

// Repeated randomized decoding of one fixed syndrome, seeds 0..runs-1.
// Aggregates the distinct convergent estimates.
struct DegeneracyEntry {
    BitVector estimate;
    std::uint64_t frequency = 0;
    std::size_t weight = 0;
    std::size_t distance_to_truth = 0;  // Hamming distance
    DecodeOutcome outcome = DecodeOutcome::SuccessExactMatch;
};

struct DegeneracyReport {
    std::uint64_t runs = 0;
    std::uint64_t converged = 0;
    std::vector<DegeneracyEntry> entries;  // sorted by frequency desc, then estimate lex
    std::uint64_t degenerate_runs = 0;     // convergent, residual a stabilizer (or exact)
    std::uint64_t logical_runs = 0;        // convergent, residual outside the stabilizer group
};

DegeneracyReport degeneracy_experiment(const CssCode& code, const BitVector& truth,
                                       std::uint64_t runs, double p_x, const GdConfig& cfg,
                                       int workers = 1);

}  // namespace bpgd
