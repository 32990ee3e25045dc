#include "bpgd/montecarlo.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "bpgd/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bpgd {

const char* to_string(DecoderKind k) {
    switch (k) {
        case DecoderKind::Bp: return "bp";
        case DecoderKind::Bpgd: return "bpgd";
        case DecoderKind::BpgdRd: return "bpgd-rd";
        case DecoderKind::Qbp: return "qbp";
        case DecoderKind::Qbpgd: return "qbpgd";
    }
    return "?";
}

DecoderKind decoder_from_string(const std::string& name) {
    if (name == "bp") return DecoderKind::Bp;
    if (name == "bpgd") return DecoderKind::Bpgd;
    if (name == "bpgd-rd") return DecoderKind::BpgdRd;
    if (name == "qbp") return DecoderKind::Qbp;
    if (name == "qbpgd") return DecoderKind::Qbpgd;
    throw std::invalid_argument("unknown decoder: " + name +
                                " (expected bp, bpgd, bpgd-rd, qbp, qbpgd)");
}

bool decoder_is_quaternary(DecoderKind k) {
    return k == DecoderKind::Qbp || k == DecoderKind::Qbpgd;
}

Wilson wilson_interval(std::uint64_t k, std::uint64_t n) {
    if (n == 0) return {0.0, 1.0};
    const double z = 1.959963984540054;  // 97.5th percentile of the standard normal
    double nn = static_cast<double>(n);
    double phat = static_cast<double>(k) / nn;
    double z2 = z * z;
    double denom = 1.0 + z2 / nn;
    double center = (phat + z2 / (2.0 * nn)) / denom;
    double half = z * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn)) / denom;
    double lo = center - half, hi = center + half;
    return {lo < 0 ? 0 : lo, hi > 1 ? 1 : hi};
}

namespace {

struct TrialRecord {
    DecodeOutcome outcome = DecodeOutcome::FailureNonConvergence;
    std::uint32_t decimations = 0;
    std::uint8_t violations = 0;
};

// Everything a trial evaluation shares read-only across workers.
struct TrialPlan {
    const CssCode& code;
    NoiseModel noise;
    DecoderSpec decoder;
    std::uint64_t master_seed;
    TannerGraph graph;           // binary decoders
    QuatGraph qgraph;            // quaternary decoders
    std::vector<double> priors;  // channel LLRs for binary decoders

    TrialPlan(const CssCode& c, const NoiseModel& nm, const DecoderSpec& d, std::uint64_t seed)
        : code(c), noise(nm), decoder(d), master_seed(seed), graph(c.H1()), qgraph(c) {
        if (!(nm.p > 0.0 && nm.p < 1.0))
            throw std::invalid_argument("run_trials: noise probability must be in (0, 1)");
        bool quat = decoder_is_quaternary(d.kind);
        if (quat && nm.kind != NoiseKind::Depolarizing)
            throw std::invalid_argument("run_trials: quaternary decoders require depolarizing noise");
        if (!quat && nm.kind != NoiseKind::BitFlip)
            throw std::invalid_argument("run_trials: binary decoders require bit-flip noise");
        if (!quat) priors.assign(c.n(), channel_llr(nm.p));
    }
};

bool trace_has_repeat(const std::vector<std::pair<std::int32_t, std::uint8_t>>& trace,
                      std::size_t n) {
    std::vector<std::uint8_t> seen(n, 0);
    for (const auto& [v, bit] : trace) {
        (void)bit;
        if (seen[v]) return true;
        seen[v] = 1;
    }
    return false;
}

TrialRecord eval_binary_trial(const TrialPlan& plan, std::uint64_t index) {
    std::mt19937_64 noise_rng = make_rng(derive_seed(plan.master_seed, index, 1));
    BitVector truth = sample_bitflip(plan.noise.p, plan.code.n(), noise_rng);
    BitVector syndrome = syndrome_x(plan.code, truth);

    TrialRecord rec;
    std::optional<BitVector> estimate;
    if (plan.decoder.kind == DecoderKind::Bp) {
        BpRunResult r = bp_run(plan.graph, syndrome, plan.priors, plan.decoder.gd.bp);
        if (r.converged) estimate = std::move(r.hard);
    } else {
        GdConfig cfg = plan.decoder.gd;
        cfg.seed = derive_seed(plan.master_seed, index, 2);
        GuidedDecimation gd(plan.graph, cfg);
        GdResult r = gd.run(syndrome, plan.priors, plan.decoder.kind == DecoderKind::BpgdRd);
        if (r.converged) {
            estimate = std::move(r.estimate);
            rec.decimations = static_cast<std::uint32_t>(r.trace.size());
        } else {
            rec.decimations = static_cast<std::uint32_t>(plan.code.n());
        }
        if (trace_has_repeat(r.trace, plan.code.n())) rec.violations |= 2;
    }
    if (estimate && syndrome_x(plan.code, *estimate) != syndrome) {
        rec.violations |= 1;
        estimate.reset();  // classified as non-convergence, counted as a violation
    }
    rec.outcome = classify_x_outcome(plan.code, truth, estimate);
    return rec;
}

TrialRecord eval_quaternary_trial(const TrialPlan& plan, std::uint64_t index) {
    std::mt19937_64 noise_rng = make_rng(derive_seed(plan.master_seed, index, 1));
    std::vector<std::uint8_t> symbols = sample_depolarizing(plan.noise.p, plan.code.n(), noise_rng);
    PauliVector truth = pauli_from_symbols(symbols);
    BitVector syndrome = syndrome_full(plan.code, truth);

    TrialRecord rec;
    std::optional<PauliVector> estimate;
    std::vector<std::pair<std::int32_t, std::uint8_t>> trace;
    if (plan.decoder.kind == DecoderKind::Qbp) {
        QbpConfig cfg;
        cfg.T = plan.decoder.qgd.T;
        QbpRunResult r = qbp_run(plan.qgraph, syndrome, plan.noise.p, cfg);
        if (r.converged) estimate = pauli_from_symbols(r.hard);
    } else {
        QGdResult r = qbpgd_decode(plan.qgraph, syndrome, plan.noise.p, plan.decoder.qgd);
        if (r.converged) {
            estimate = pauli_from_symbols(r.estimate);
            rec.decimations = static_cast<std::uint32_t>(r.trace.size());
        } else {
            rec.decimations = static_cast<std::uint32_t>(plan.code.n());
        }
        if (trace_has_repeat(r.trace, plan.code.n())) rec.violations |= 2;
    }
    if (estimate && syndrome_full(plan.code, *estimate) != syndrome) {
        rec.violations |= 1;
        estimate.reset();
    }
    rec.outcome = classify_quaternary_outcome(plan.code, truth, estimate);
    return rec;
}

TrialRecord eval_trial(const TrialPlan& plan, std::uint64_t index) {
    return decoder_is_quaternary(plan.decoder.kind) ? eval_quaternary_trial(plan, index)
                                                    : eval_binary_trial(plan, index);
}

// Sequential fold; returns true once the stopping rule fires.
bool fold(TrialStats& agg, const TrialRecord& rec, const StoppingRule& stopping) {
    ++agg.trials;
    ++agg.outcome_counts[static_cast<std::size_t>(rec.outcome)];
    if (rec.outcome == DecodeOutcome::FailureNonConvergence ||
        rec.outcome == DecodeOutcome::FailureLogical)
        ++agg.block_errors;
    agg.decimation_total += rec.decimations;
    if (rec.violations & 1) ++agg.postcondition_violations;
    if (rec.violations & 2) ++agg.postcondition_violations;
    return stopping.target_errors > 0 && agg.block_errors >= stopping.target_errors;
}

}  // namespace

TrialStats run_trials_serial(const CssCode& code, const NoiseModel& noise,
                             const DecoderSpec& decoder, const StoppingRule& stopping,
                             std::uint64_t master_seed) {
    if (stopping.max_trials == 0)
        throw std::invalid_argument("run_trials: max_trials must be positive");
    TrialPlan plan(code, noise, decoder, master_seed);
    auto t0 = std::chrono::steady_clock::now();
    TrialStats agg;
    for (std::uint64_t i = 0; i < stopping.max_trials; ++i) {
        if (fold(agg, eval_trial(plan, i), stopping)) break;
    }
    agg.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return agg;
}

TrialStats run_trials(const CssCode& code, const NoiseModel& noise, const DecoderSpec& decoder,
                      const StoppingRule& stopping, std::uint64_t master_seed, int workers) {
    if (workers <= 1) return run_trials_serial(code, noise, decoder, stopping, master_seed);
    if (stopping.max_trials == 0)
        throw std::invalid_argument("run_trials: max_trials must be positive");
    TrialPlan plan(code, noise, decoder, master_seed);
    auto t0 = std::chrono::steady_clock::now();
    TrialStats agg;
#ifdef _OPENMP
    constexpr std::uint64_t kChunk = 256;
    std::vector<TrialRecord> records(kChunk);
    bool done = false;
    for (std::uint64_t base = 0; base < stopping.max_trials && !done; base += kChunk) {
        std::uint64_t count = std::min(kChunk, stopping.max_trials - base);
        #pragma omp parallel for num_threads(workers) schedule(dynamic, 8)
        for (long long i = 0; i < static_cast<long long>(count); ++i)
            records[i] = eval_trial(plan, base + i);
        for (std::uint64_t i = 0; i < count; ++i) {
            if (fold(agg, records[i], stopping)) {
                done = true;
                break;
            }
        }
    }
#else
    for (std::uint64_t i = 0; i < stopping.max_trials; ++i)
        if (fold(agg, eval_trial(plan, i), stopping)) break;
#endif
    agg.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return agg;
}

SweepRow make_sweep_row(const CssCode& code, const DecoderSpec& decoder, double p,
                        std::uint64_t seed, TrialStats stats) {
    SweepRow row;
    row.code = code.name();
    row.decoder = to_string(decoder.kind);
    row.variant = decoder.gd.bp.variant == BpVariant::MinSum ? "min-sum" : "sum-product";
    row.p = p;
    if (decoder.kind == DecoderKind::Bp) {
        row.T = decoder.gd.bp.T;
        row.R = 1;
    } else if (decoder_is_quaternary(decoder.kind)) {
        row.T = decoder.qgd.T;
        row.R = decoder.kind == DecoderKind::Qbp
                    ? 1
                    : (decoder.qgd.R == 0 ? static_cast<int>(code.n()) : decoder.qgd.R);
    } else {
        row.T = decoder.gd.T;
        row.R = decoder.gd.R == 0 ? static_cast<int>(code.n()) : decoder.gd.R;
    }
    row.gamma_prime = decoder.gd.gamma_prime;
    row.seed = seed;
    row.stats = stats;
    return row;
}

namespace {
std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}
}  // namespace

std::string sweep_csv(std::span<const SweepRow> rows) {
    std::ostringstream out;
    out << "code,decoder,variant,p,T,R,gamma_prime,seed,trials,block_errors,bler,"
           "bler_ci_lo,bler_ci_hi,nonconv_frac,r_avg,wall_s\n";
    for (const SweepRow& r : rows) {
        Wilson ci = r.stats.bler_ci();
        out << r.code << ',' << r.decoder << ',' << r.variant << ',' << fmt_double(r.p) << ','
            << r.T << ',' << r.R << ',' << fmt_double(r.gamma_prime) << ',' << r.seed << ','
            << r.stats.trials << ',' << r.stats.block_errors << ',' << fmt_double(r.stats.bler())
            << ',' << fmt_double(ci.lo) << ',' << fmt_double(ci.hi) << ','
            << fmt_double(r.stats.nonconv_frac()) << ',' << fmt_double(r.stats.r_avg()) << ','
            << fmt_double(r.stats.wall_s) << '\n';
    }
    return out.str();
}

std::string sweep_json(std::span<const SweepRow> rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const SweepRow& r : rows) {
        Wilson ci = r.stats.bler_ci();
        arr.push_back({{"code", r.code},
                       {"decoder", r.decoder},
                       {"variant", r.variant},
                       {"p", r.p},
                       {"T", r.T},
                       {"R", r.R},
                       {"gamma_prime", r.gamma_prime},
                       {"seed", r.seed},
                       {"trials", r.stats.trials},
                       {"block_errors", r.stats.block_errors},
                       {"bler", r.stats.bler()},
                       {"bler_ci_lo", ci.lo},
                       {"bler_ci_hi", ci.hi},
                       {"nonconv_frac", r.stats.nonconv_frac()},
                       {"r_avg", r.stats.r_avg()},
                       {"wall_s", r.stats.wall_s}});
    }
    return arr.dump(2) + "\n";
}

}  // namespace bpgd
