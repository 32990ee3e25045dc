#include "bpgd/decimation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "bpgd/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bpgd {

GuidedDecimation::GuidedDecimation(const TannerGraph& graph, const GdConfig& cfg)
    : graph_(graph), cfg_(cfg), engine_(graph, cfg.bp), decimated_(graph.num_vars, 0) {
    if (cfg_.R == 0) cfg_.R = static_cast<int>(graph.num_vars);
    if (cfg_.R < 1 || cfg_.R > static_cast<int>(graph.num_vars))
        throw std::invalid_argument("GdConfig: R must be in [1, n]");
    if (!(cfg_.llr_max > 0)) throw std::invalid_argument("GdConfig: llr_max must be positive");
    if (!(cfg_.gamma_prime >= 0)) throw std::invalid_argument("GdConfig: gamma_prime must be >= 0");
    if (cfg_.T < 1) throw std::invalid_argument("GdConfig: T must be >= 1");
}

std::size_t GuidedDecimation::select_deterministic() const {
    const auto& bias = engine_.biases();
    std::size_t best = graph_.num_vars;
    double best_gamma = -1.0;
    for (std::size_t v = 0; v < graph_.num_vars; ++v) {
        if (decimated_[v]) continue;
        double g = std::fabs(bias[v]);
        if (g > best_gamma) {
            best_gamma = g;
            best = v;
        }
    }
    return best;
}

std::size_t GuidedDecimation::select_randomized(std::mt19937_64& rng) const {
    const auto& bias = engine_.biases();
    double gamma_max = -1.0;
    for (std::size_t v = 0; v < graph_.num_vars; ++v) {
        if (decimated_[v]) continue;
        gamma_max = std::max(gamma_max, std::fabs(bias[v]));
    }
    std::vector<std::size_t> pool;
    for (std::size_t v = 0; v < graph_.num_vars; ++v) {
        if (decimated_[v]) continue;
        if (std::fabs(bias[v]) >= gamma_max - cfg_.gamma_prime) pool.push_back(v);
    }
    return pool[uniform_below(rng, pool.size())];
}

GdResult GuidedDecimation::run(const BitVector& syndrome, std::span<const double> priors,
                               bool randomized) {
    std::fill(decimated_.begin(), decimated_.end(), 0);
    engine_.reset(syndrome, priors);
    std::mt19937_64 rng = make_rng(cfg_.seed);

    GdResult res;
    for (int round = 1; round <= cfg_.R; ++round) {
        engine_.run(cfg_.T, /*check_initial=*/round == 1);
        if (engine_.converged()) {
            res.converged = true;
            res.estimate = engine_.hard_bits();
            res.rounds_used = round;
            return res;
        }
        std::size_t v = randomized ? select_randomized(rng) : select_deterministic();
        double bias = engine_.biases()[v];
        std::uint8_t bit = bias > 0 ? 0 : 1;  // ties pin to 1, matching the hard rule
        engine_.set_prior(v, bit ? -cfg_.llr_max : cfg_.llr_max);
        decimated_[v] = 1;
        res.trace.emplace_back(static_cast<std::int32_t>(v), bit);
    }
    res.converged = false;
    res.rounds_used = cfg_.R;
    return res;
}

GdResult bpgd_decode(const TannerGraph& graph, const BitVector& syndrome,
                     std::span<const double> priors, const GdConfig& cfg) {
    GuidedDecimation gd(graph, cfg);
    return gd.run(syndrome, priors, /*randomized=*/false);
}

GdResult bpgd_rd_decode(const TannerGraph& graph, const BitVector& syndrome,
                        std::span<const double> priors, const GdConfig& cfg) {
    GuidedDecimation gd(graph, cfg);
    return gd.run(syndrome, priors, /*randomized=*/true);
}

DegeneracyReport degeneracy_experiment(const CssCode& code, const BitVector& truth,
                                       std::uint64_t runs, double p_x, const GdConfig& cfg,
                                       int workers) {
    TannerGraph graph(code.H1());
    BitVector syndrome = syndrome_x(code, truth);
    std::vector<double> priors(code.n(), channel_llr(p_x));

    std::vector<std::optional<BitVector>> estimates(runs);
#ifdef _OPENMP
    if (workers > 1) {
        #pragma omp parallel for num_threads(workers) schedule(dynamic, 16)
        for (long long k = 0; k < static_cast<long long>(runs); ++k) {
            GdConfig c = cfg;
            c.seed = static_cast<std::uint64_t>(k);
            GuidedDecimation gd(graph, c);
            GdResult r = gd.run(syndrome, priors, /*randomized=*/true);
            if (r.converged) estimates[k] = std::move(r.estimate);
        }
    } else
#endif
    {
        for (std::uint64_t k = 0; k < runs; ++k) {
            GdConfig c = cfg;
            c.seed = k;
            GuidedDecimation gd(graph, c);
            GdResult r = gd.run(syndrome, priors, /*randomized=*/true);
            if (r.converged) estimates[k] = std::move(r.estimate);
        }
    }

    DegeneracyReport rep;
    rep.runs = runs;
    std::map<std::string, DegeneracyEntry> by_estimate;  // keyed on bit string
    for (std::uint64_t k = 0; k < runs; ++k) {
        if (!estimates[k]) continue;
        ++rep.converged;
        const BitVector& est = *estimates[k];
        DecodeOutcome out = classify_x_outcome(code, truth, est);
        if (out == DecodeOutcome::FailureLogical) ++rep.logical_runs;
        else ++rep.degenerate_runs;
        auto [it, fresh] = by_estimate.try_emplace(est.to_string());
        if (fresh) {
            it->second.estimate = est;
            it->second.weight = est.weight();
            it->second.distance_to_truth = (est ^ truth).weight();
            it->second.outcome = out;
        }
        ++it->second.frequency;
    }
    rep.entries.reserve(by_estimate.size());
    for (auto& [_, entry] : by_estimate) rep.entries.push_back(std::move(entry));
    std::sort(rep.entries.begin(), rep.entries.end(),
              [](const DegeneracyEntry& a, const DegeneracyEntry& b) {
                  if (a.frequency != b.frequency) return a.frequency > b.frequency;
                  return a.estimate.lex_less(b.estimate);
              });
    return rep;
}

}  // namespace bpgd
