#include "bpgd/bp.hpp"

#include <cmath>
#include <stdexcept>

namespace bpgd {

namespace {
constexpr double kAtanhClamp = 1.0 - 1e-15;

inline double clip(double x, double K) {
    if (x > K) return K;
    if (x < -K) return -K;
    return x;
}
}  // namespace

double channel_llr(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("channel_llr: probability must be in (0, 1)");
    return std::log((1.0 - p) / p);
}

double check_update(std::span<const double> incoming, bool syndrome_bit, const BpConfig& cfg) {
    double sign = syndrome_bit ? -1.0 : 1.0;
    if (incoming.empty()) return sign * cfg.K;
    if (cfg.variant == BpVariant::MinSum) {
        double mag = HUGE_VAL;
        for (double m : incoming) {
            if (m < 0) sign = -sign;
            double a = std::fabs(m);
            if (a < mag) mag = a;
        }
        return sign * cfg.alpha * mag;
    }
    double prod = 1.0;
    for (double m : incoming) prod *= std::tanh(0.5 * m);
    prod = std::fmin(kAtanhClamp, std::fmax(-kAtanhClamp, prod));
    return sign * 2.0 * std::atanh(prod);
}

double variable_update(double prior, std::span<const double> incoming, const BpConfig& cfg) {
    double sum = prior;
    for (double m : incoming) sum += m;
    return clip(sum, cfg.K);
}

BpEngine::BpEngine(const TannerGraph& graph, BpConfig cfg) : graph_(graph), cfg_(cfg) {
    if (!(cfg_.K > 0)) throw std::invalid_argument("BpConfig: K must be positive");
    if (!(cfg_.alpha > 0 && cfg_.alpha <= 1))
        throw std::invalid_argument("BpConfig: alpha must be in (0, 1]");
    prior_.resize(graph_.num_vars);
    v2c_.resize(graph_.num_edges());
    c2v_.resize(graph_.num_edges());
    bias_.resize(graph_.num_vars);
    hard_.resize(graph_.num_vars);
    syndrome_.resize(graph_.num_checks);
    std::size_t maxdeg = 0;
    for (std::size_t c = 0; c < graph_.num_checks; ++c)
        maxdeg = std::max(maxdeg, graph_.check_degree(c));
    scratch_.resize(2 * (maxdeg + 1));
}

void BpEngine::reset(const BitVector& syndrome, std::span<const double> priors) {
    if (syndrome.size() != graph_.num_checks)
        throw std::invalid_argument("BpEngine::reset: syndrome length mismatch");
    if (priors.size() != graph_.num_vars)
        throw std::invalid_argument("BpEngine::reset: prior length mismatch");
    for (std::size_t c = 0; c < graph_.num_checks; ++c) syndrome_[c] = syndrome.get(c);
    for (std::size_t v = 0; v < graph_.num_vars; ++v) prior_[v] = priors[v];
    for (std::size_t e = 0; e < graph_.num_edges(); ++e) {
        v2c_[e] = clip(prior_[graph_.edge_var[e]], cfg_.K);
        c2v_[e] = 0.0;
    }
    refresh_decision();
    converged_ = false;
}

void BpEngine::set_prior(std::size_t v, double llr) { prior_[v] = llr; }

void BpEngine::refresh_decision() {
    for (std::size_t v = 0; v < graph_.num_vars; ++v) {
        double total = prior_[v];
        for (std::int32_t i = graph_.var_offset[v]; i < graph_.var_offset[v + 1]; ++i)
            total += c2v_[graph_.var_edges[i]];
        bias_[v] = clip(total, cfg_.K);
        hard_[v] = bias_[v] > 0 ? 0 : 1;
    }
}

bool BpEngine::syndrome_matched() const {
    for (std::size_t c = 0; c < graph_.num_checks; ++c) {
        std::uint8_t parity = 0;
        for (std::int32_t i = graph_.check_offset[c]; i < graph_.check_offset[c + 1]; ++i)
            parity ^= hard_[graph_.edge_var[i]];
        if (parity != syndrome_[c]) return false;
    }
    return true;
}

void BpEngine::iterate_once() {
    // check pass: leave-one-out products via prefix/suffix (no division, so a
    // zero message poisons only the edges it should)
    double* prefix = scratch_.data();
    double* suffix = scratch_.data() + scratch_.size() / 2;
    for (std::size_t c = 0; c < graph_.num_checks; ++c) {
        std::int32_t lo = graph_.check_offset[c], hi = graph_.check_offset[c + 1];
        std::int32_t deg = hi - lo;
        double sign = syndrome_[c] ? -1.0 : 1.0;
        if (deg == 1) {
            c2v_[lo] = sign * cfg_.K;  // empty leave-one-out product saturates
            continue;
        }
        if (cfg_.variant == BpVariant::MinSum) {
            double min1 = HUGE_VAL, min2 = HUGE_VAL;
            std::int32_t argmin = lo;
            double total_sign = sign;
            for (std::int32_t e = lo; e < hi; ++e) {
                double m = v2c_[e];
                if (m < 0) total_sign = -total_sign;
                double a = std::fabs(m);
                if (a < min1) {
                    min2 = min1;
                    min1 = a;
                    argmin = e;
                } else if (a < min2) {
                    min2 = a;
                }
            }
            for (std::int32_t e = lo; e < hi; ++e) {
                double m = v2c_[e];
                double s = (m < 0) ? -total_sign : total_sign;
                double mag = (e == argmin) ? min2 : min1;
                c2v_[e] = cfg_.alpha * s * mag;
            }
        } else {
            prefix[0] = 1.0;
            for (std::int32_t i = 0; i < deg; ++i)
                prefix[i + 1] = prefix[i] * std::tanh(0.5 * v2c_[lo + i]);
            suffix[deg] = 1.0;
            for (std::int32_t i = deg - 1; i >= 0; --i)
                suffix[i] = suffix[i + 1] * std::tanh(0.5 * v2c_[lo + i]);
            for (std::int32_t i = 0; i < deg; ++i) {
                double prod = prefix[i] * suffix[i + 1];
                prod = std::fmin(kAtanhClamp, std::fmax(-kAtanhClamp, prod));
                c2v_[lo + i] = sign * 2.0 * std::atanh(prod);
            }
        }
    }
    // variable pass
    for (std::size_t v = 0; v < graph_.num_vars; ++v) {
        double total = prior_[v];
        for (std::int32_t i = graph_.var_offset[v]; i < graph_.var_offset[v + 1]; ++i)
            total += c2v_[graph_.var_edges[i]];
        bias_[v] = clip(total, cfg_.K);
        hard_[v] = bias_[v] > 0 ? 0 : 1;
        for (std::int32_t i = graph_.var_offset[v]; i < graph_.var_offset[v + 1]; ++i) {
            std::int32_t e = graph_.var_edges[i];
            v2c_[e] = clip(total - c2v_[e], cfg_.K);
        }
    }
}

int BpEngine::run(int iters, bool check_initial, bool early_stop) {
    if (check_initial) {
        refresh_decision();
        if (syndrome_matched()) {
            converged_ = true;
            return 0;
        }
    }
    for (int t = 1; t <= iters; ++t) {
        iterate_once();
        if (early_stop && syndrome_matched()) {
            converged_ = true;
            return t;
        }
    }
    if (!early_stop && syndrome_matched()) {
        converged_ = true;
        return iters;
    }
    converged_ = false;
    return iters;
}

BitVector BpEngine::hard_bits() const {
    BitVector x(graph_.num_vars);
    for (std::size_t v = 0; v < graph_.num_vars; ++v)
        if (hard_[v]) x.set(v, true);
    return x;
}

BpRunResult bp_run(const TannerGraph& graph, const BitVector& syndrome,
                   std::span<const double> priors, const BpConfig& cfg) {
    BpEngine engine(graph, cfg);
    engine.reset(syndrome, priors);
    int used = engine.run(cfg.T, /*check_initial=*/true);
    BpRunResult res;
    res.converged = engine.converged();
    res.hard = engine.hard_bits();
    res.biases = engine.biases();
    res.iterations_used = used;
    return res;
}

}  // namespace bpgd
