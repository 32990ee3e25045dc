#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "bpgd/css.hpp"
#include "bpgd/gf2.hpp"

// Quaternary belief propagation for depolarizing noise, with scalar
// commute/anticommute edge messages and 4-ary beliefs per qubit.
// Symbols: 0 = I, 1 = X, 2 = Y, 3 = Z.

namespace bpgd {

constexpr std::uint8_t kPauliI = 0, kPauliX = 1, kPauliY = 2, kPauliZ = 3;

// Joint check graph: one check per H1 row (Pauli component Z on its support,
// detecting the X part of the error) followed by one per G2 row (component X).
// Built straight from the matrices; no CSS commutation requirement, so tiny
// non-code gadgets can be exercised in tests.
struct QuatGraph {
    std::size_t num_vars = 0;
    std::size_t checks_h1 = 0;  // leading checks, Z component
    std::size_t checks_g2 = 0;  // trailing checks, X component
    std::vector<std::int32_t> check_offset;
    std::vector<std::int32_t> var_offset;
    std::vector<std::int32_t> var_edges;
    std::vector<std::int32_t> edge_var;
    std::vector<std::int32_t> edge_check;
    std::vector<std::uint8_t> edge_is_x;  // 1 = X-component edge (from G2)

    QuatGraph(const BitMatrix& H1, const BitMatrix& G2);
    explicit QuatGraph(const CssCode& code) : QuatGraph(code.H1(), code.G2()) {}

    std::size_t num_checks() const { return checks_h1 + checks_g2; }
    std::size_t num_edges() const { return edge_var.size(); }
};

struct QbpConfig {
    int T = 10;  // iteration budget for qbp_run
};

struct QbpRunResult {
    bool converged = false;
    std::vector<std::uint8_t> hard;                 // symbol per qubit
    std::vector<std::array<double, 4>> beliefs;     // normalized per qubit
    int iterations_used = 0;
};

struct QGdConfig {
    int T = 10;
    int R = 0;               // 0 means "use n"
    double epsilon = 1e-10;  // decimated prior: 1-eps on the chosen symbol, eps elsewhere
};

struct QGdResult {
    bool converged = false;
    std::vector<std::uint8_t> estimate;  // valid iff converged
    int rounds_used = 0;
    std::vector<std::pair<std::int32_t, std::uint8_t>> trace;  // (variable, symbol)
};

// Symplectic form of a symbol string: x bit for X/Y, z bit for Y/Z.
PauliVector pauli_from_symbols(std::span<const std::uint8_t> symbols);

// Depolarizing prior (1-p, p/3, p/3, p/3); requires 0 < p < 1.
std::array<double, 4> depolarizing_prior(double p);

class QbpEngine {
public:
    QbpEngine(const QuatGraph& graph, double saturation_llr = 0.0);  // 0 = atanh clamp bound

    void reset(const BitVector& syndrome, std::span<const std::array<double, 4>> priors);
    void set_prior(std::size_t v, const std::array<double, 4>& p);
    const std::array<double, 4>& prior(std::size_t v) const { return prior_[v]; }

    int run(int iters, bool check_initial, bool early_stop = true);

    bool converged() const { return converged_; }
    const std::vector<std::array<double, 4>>& beliefs() const { return belief_; }
    const std::vector<std::uint8_t>& hard() const { return hard_; }
    const QuatGraph& graph() const { return graph_; }

private:
    void iterate_once();
    void refresh_decision();
    bool syndrome_matched() const;
    double edge_prior_llr(std::size_t e) const;

    const QuatGraph& graph_;
    double sat_;  // magnitude cap on edge messages (guards atanh saturation)
    std::vector<std::uint8_t> syndrome_;
    std::vector<std::array<double, 4>> prior_, belief_;
    std::vector<double> v2c_, c2v_;
    std::vector<std::uint8_t> hard_;
    std::vector<double> scratch_;
    std::vector<std::array<double, 4>> vscratch_;
    bool converged_ = false;
};

QbpRunResult qbp_run(const QuatGraph& graph, const BitVector& syndrome, double p,
                     const QbpConfig& cfg);

// Guided decimation: pick the undecimated qubit with the largest reliability
// max_j belief_j (ties to the lowest index, then the lowest symbol) and pin
// its prior to the epsilon-concentrated vector for its argmax symbol.
QGdResult qbpgd_decode(const QuatGraph& graph, const BitVector& syndrome, double p,
                       const QGdConfig& cfg);

}  // namespace bpgd
