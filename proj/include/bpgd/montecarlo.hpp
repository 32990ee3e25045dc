#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "bpgd/css.hpp"
#include "bpgd/decimation.hpp"
#include "bpgd/noise.hpp"
#include "bpgd/qbp.hpp"

// Monte Carlo harness. Trials are independent; trial index and master seed
// alone determine the sampled error and any decoder randomness, so results
// do not depend on the worker count. The parallel kernel evaluates trials in
// fixed-size chunks with OpenMP and folds them sequentially in index order;
// the serial reference implementation folds one trial at a time. Both honor
// the stopping rule at the same trial boundary.

namespace bpgd {

enum class DecoderKind : std::uint8_t { Bp = 0, Bpgd = 1, BpgdRd = 2, Qbp = 3, Qbpgd = 4 };

const char* to_string(DecoderKind k);
DecoderKind decoder_from_string(const std::string& name);  // throws on unknown name
bool decoder_is_quaternary(DecoderKind k);

struct DecoderSpec {
    DecoderKind kind = DecoderKind::Bpgd;
    GdConfig gd;    // binary decoders; gd.bp.T is the plain-BP iteration budget
    QGdConfig qgd;  // quaternary decoders
};

struct StoppingRule {
    std::uint64_t max_trials = 10000;
    std::uint64_t target_errors = 100;  // 0 disables the error target
};

struct Wilson {
    double lo = 0.0, hi = 1.0;
};
// 95% Wilson score interval for k successes out of n.
Wilson wilson_interval(std::uint64_t k, std::uint64_t n);

struct TrialStats {
    std::uint64_t trials = 0;
    std::array<std::uint64_t, 4> outcome_counts{};  // indexed by DecodeOutcome
    std::uint64_t block_errors = 0;                 // nonconvergence + logical
    std::uint64_t decimation_total = 0;  // non-convergent decimation decodes count n
    std::uint64_t postcondition_violations = 0;
    double wall_s = 0.0;

    double bler() const { return trials ? double(block_errors) / double(trials) : 0.0; }
    double nonconv_frac() const {
        return trials ? double(outcome_counts[0]) / double(trials) : 0.0;
    }
    double r_avg() const { return trials ? double(decimation_total) / double(trials) : 0.0; }
    Wilson bler_ci() const { return wilson_interval(block_errors, trials); }
};

// Serial reference implementation (no OpenMP), kept for testing.
TrialStats run_trials_serial(const CssCode& code, const NoiseModel& noise,
                             const DecoderSpec& decoder, const StoppingRule& stopping,
                             std::uint64_t master_seed);

// OpenMP kernel; workers <= 1 falls back to the serial reference.
TrialStats run_trials(const CssCode& code, const NoiseModel& noise, const DecoderSpec& decoder,
                      const StoppingRule& stopping, std::uint64_t master_seed, int workers);

// One result row of a probability sweep.
struct SweepRow {
    std::string code;
    std::string decoder;
    std::string variant;  // "sum-product" or "min-sum"
    double p = 0.0;
    int T = 0;
    int R = 0;
    double gamma_prime = 0.0;
    std::uint64_t seed = 0;
    TrialStats stats;
};

SweepRow make_sweep_row(const CssCode& code, const DecoderSpec& decoder, double p,
                        std::uint64_t seed, TrialStats stats);

// CSV with the fixed column set (header + one line per row).
std::string sweep_csv(std::span<const SweepRow> rows);
// JSON array mirroring the same fields.
std::string sweep_json(std::span<const SweepRow> rows);

}  // namespace bpgd
