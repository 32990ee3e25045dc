#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bpgd/gf2.hpp"
#include "bpgd/tanner.hpp"

// Binary belief propagation for syndrome decoding, flooding schedule.
// Log-likelihood ratio convention: positive means "bit is 0".

namespace bpgd {

enum class BpVariant : std::uint8_t { SumProduct = 0, MinSum = 1 };

struct BpConfig {
    BpVariant variant = BpVariant::SumProduct;
    double alpha = 0.625;  // min-sum scaling factor
    double K = 25.0;       // saturation bound for variable messages and biases
    int T = 10;            // iteration budget for bp_run
};

struct BpRunResult {
    bool converged = false;
    BitVector hard;               // hard decision at the reporting iteration
    std::vector<double> biases;   // per-variable posterior LLR estimate
    int iterations_used = 0;      // 0 means the priors alone matched the syndrome
};

// Channel log-likelihood ratio log((1-p)/p); requires 0 < p < 1.
double channel_llr(double p);

// One check-node output: (-1)^syndrome_bit * 2 atanh(prod tanh(m/2)) for
// sum-product, or (-1)^syndrome_bit * alpha * prod(sign) * min|m| for min-sum.
// `incoming` excludes the destination edge. An empty product saturates to
// (+/-)K. The atanh argument is clamped to +/-(1 - 1e-15).
double check_update(std::span<const double> incoming, bool syndrome_bit, const BpConfig& cfg);

// One variable-node output: prior + sum(incoming), clipped to [-K, K].
double variable_update(double prior, std::span<const double> incoming, const BpConfig& cfg);

// Message-passing state over a fixed graph. Kept warm across calls so that
// guided decimation can continue iterating after overwriting priors.
class BpEngine {
public:
    BpEngine(const TannerGraph& graph, BpConfig cfg);

    // Restart: variable->check messages become the priors, check->variable
    // messages zero, biases = priors.
    void reset(const BitVector& syndrome, std::span<const double> priors);
    void set_prior(std::size_t v, double llr);
    double prior(std::size_t v) const { return prior_[v]; }

    // Run up to `iters` flooding iterations. If `check_initial`, test the
    // current hard decision against the syndrome before iterating (so an
    // all-zero syndrome converges in 0 iterations). With `early_stop`, return
    // at the first iteration whose hard vector reproduces the syndrome.
    // Returns the number of iterations executed.
    int run(int iters, bool check_initial, bool early_stop = true);

    bool converged() const { return converged_; }
    const std::vector<double>& biases() const { return bias_; }
    const std::vector<std::uint8_t>& hard() const { return hard_; }
    BitVector hard_bits() const;
    const TannerGraph& graph() const { return graph_; }
    const BpConfig& config() const { return cfg_; }

private:
    void iterate_once();
    void refresh_decision();       // biases + hard from current messages
    bool syndrome_matched() const;

    const TannerGraph& graph_;
    BpConfig cfg_;
    std::vector<std::uint8_t> syndrome_;
    std::vector<double> prior_;
    std::vector<double> v2c_, c2v_;  // indexed by edge id
    std::vector<double> bias_;
    std::vector<std::uint8_t> hard_;
    std::vector<double> scratch_;    // prefix/suffix workspace per check
    bool converged_ = false;
};

// Plain BP decode attempt: reset + run(cfg.T) with the initial priors-only
// convergence check. Converged implies mat_vec_mul(H1, hard) == syndrome.
BpRunResult bp_run(const TannerGraph& graph, const BitVector& syndrome,
                   std::span<const double> priors, const BpConfig& cfg);

}  // namespace bpgd
