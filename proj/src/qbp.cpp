#include "bpgd/qbp.hpp"

#include <cmath>
#include <stdexcept>

namespace bpgd {

namespace {
constexpr double kAtanhClamp = 1.0 - 1e-15;
constexpr double kFloor = 1e-300;

// commuting-symbol mask per component: bit j set = symbol j commutes
// Z component: {I, Z}; X component: {I, X}
constexpr std::uint8_t kCommuteMaskZ = 0b1001;
constexpr std::uint8_t kCommuteMaskX = 0b0011;

inline std::uint8_t commute_mask(bool edge_is_x) {
    return edge_is_x ? kCommuteMaskX : kCommuteMaskZ;
}
}  // namespace

QuatGraph::QuatGraph(const BitMatrix& H1, const BitMatrix& G2) {
    if (G2.rows() > 0 && G2.cols() != H1.cols())
        throw std::invalid_argument("QuatGraph: H1 and G2 column counts differ");
    num_vars = H1.cols();
    checks_h1 = H1.rows();
    checks_g2 = G2.rows();
    check_offset.assign(num_checks() + 1, 0);
    std::vector<std::int32_t> var_deg(num_vars, 0);
    auto add_rows = [&](const BitMatrix& M, std::size_t base, bool is_x) {
        for (std::size_t r = 0; r < M.rows(); ++r) {
            auto sup = M.row(r).support();
            check_offset[base + r + 1] = check_offset[base + r] + static_cast<std::int32_t>(sup.size());
            for (std::size_t v : sup) {
                edge_var.push_back(static_cast<std::int32_t>(v));
                edge_check.push_back(static_cast<std::int32_t>(base + r));
                edge_is_x.push_back(is_x);
                ++var_deg[v];
            }
        }
    };
    add_rows(H1, 0, false);
    add_rows(G2, checks_h1, true);
    var_offset.assign(num_vars + 1, 0);
    for (std::size_t v = 0; v < num_vars; ++v) var_offset[v + 1] = var_offset[v] + var_deg[v];
    var_edges.assign(edge_var.size(), 0);
    std::vector<std::int32_t> cursor(var_offset.begin(), var_offset.end() - 1);
    for (std::size_t e = 0; e < edge_var.size(); ++e)
        var_edges[cursor[edge_var[e]]++] = static_cast<std::int32_t>(e);
}

PauliVector pauli_from_symbols(std::span<const std::uint8_t> symbols) {
    PauliVector p(symbols.size());
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        if (symbols[i] == kPauliX || symbols[i] == kPauliY) p.x.set(i, true);
        if (symbols[i] == kPauliY || symbols[i] == kPauliZ) p.z.set(i, true);
    }
    return p;
}

std::array<double, 4> depolarizing_prior(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("depolarizing_prior: probability must be in (0, 1)");
    return {1.0 - p, p / 3.0, p / 3.0, p / 3.0};
}

QbpEngine::QbpEngine(const QuatGraph& graph, double saturation_llr)
    : graph_(graph), sat_(saturation_llr > 0 ? saturation_llr : 2.0 * std::atanh(kAtanhClamp)) {
    prior_.resize(graph_.num_vars);
    belief_.resize(graph_.num_vars);
    v2c_.resize(graph_.num_edges());
    c2v_.resize(graph_.num_edges());
    hard_.resize(graph_.num_vars);
    syndrome_.resize(graph_.num_checks());
    std::size_t maxcdeg = 0, maxvdeg = 0;
    for (std::size_t c = 0; c < graph_.num_checks(); ++c)
        maxcdeg = std::max<std::size_t>(maxcdeg, graph_.check_offset[c + 1] - graph_.check_offset[c]);
    for (std::size_t v = 0; v < graph_.num_vars; ++v)
        maxvdeg = std::max<std::size_t>(maxvdeg, graph_.var_offset[v + 1] - graph_.var_offset[v]);
    scratch_.resize(2 * (maxcdeg + 1));
    vscratch_.resize(2 * (maxvdeg + 1));
}

double QbpEngine::edge_prior_llr(std::size_t e) const {
    const auto& p = prior_[graph_.edge_var[e]];
    std::uint8_t mask = commute_mask(graph_.edge_is_x[e]);
    double comm = 0, anti = 0;
    for (int j = 0; j < 4; ++j) ((mask >> j) & 1 ? comm : anti) += p[j];
    comm = std::max(comm, kFloor);
    anti = std::max(anti, kFloor);
    double m = std::log(comm / anti);
    return std::fmin(sat_, std::fmax(-sat_, m));
}

void QbpEngine::reset(const BitVector& syndrome, std::span<const std::array<double, 4>> priors) {
    if (syndrome.size() != graph_.num_checks())
        throw std::invalid_argument("QbpEngine::reset: syndrome length mismatch");
    if (priors.size() != graph_.num_vars)
        throw std::invalid_argument("QbpEngine::reset: prior length mismatch");
    for (std::size_t c = 0; c < graph_.num_checks(); ++c) syndrome_[c] = syndrome.get(c);
    for (std::size_t v = 0; v < graph_.num_vars; ++v) prior_[v] = priors[v];
    for (std::size_t e = 0; e < graph_.num_edges(); ++e) {
        v2c_[e] = edge_prior_llr(e);
        c2v_[e] = 0.0;
    }
    refresh_decision();
    converged_ = false;
}

void QbpEngine::set_prior(std::size_t v, const std::array<double, 4>& p) { prior_[v] = p; }

void QbpEngine::refresh_decision() {
    for (std::size_t v = 0; v < graph_.num_vars; ++v) {
        std::array<double, 4> q = prior_[v];
        for (std::int32_t i = graph_.var_offset[v]; i < graph_.var_offset[v + 1]; ++i) {
            std::int32_t e = graph_.var_edges[i];
            double pc = 1.0 / (1.0 + std::exp(-c2v_[e]));
            double pa = 1.0 - pc;
            std::uint8_t mask = commute_mask(graph_.edge_is_x[e]);
            for (int j = 0; j < 4; ++j) q[j] *= ((mask >> j) & 1) ? pc : pa;
        }
        double total = 0;
        for (int j = 0; j < 4; ++j) {
            q[j] = std::max(q[j], kFloor);
            total += q[j];
        }
        for (int j = 0; j < 4; ++j) q[j] /= total;
        belief_[v] = q;
        int best = 0;
        for (int j = 1; j < 4; ++j)
            if (q[j] > q[best]) best = j;
        hard_[v] = static_cast<std::uint8_t>(best);
    }
}

bool QbpEngine::syndrome_matched() const {
    for (std::size_t c = 0; c < graph_.num_checks(); ++c) {
        std::uint8_t parity = 0;
        for (std::int32_t i = graph_.check_offset[c]; i < graph_.check_offset[c + 1]; ++i) {
            std::uint8_t mask = commute_mask(graph_.edge_is_x[i] /*edge id == position*/);
            std::uint8_t sym = hard_[graph_.edge_var[i]];
            parity ^= ((mask >> sym) & 1) ^ 1;  // anticommuting symbol flips the check
        }
        if (parity != syndrome_[c]) return false;
    }
    return true;
}

void QbpEngine::iterate_once() {
    // check pass: binary tanh rule on the scalar messages
    double* prefix = scratch_.data();
    double* suffix = scratch_.data() + scratch_.size() / 2;
    for (std::size_t c = 0; c < graph_.num_checks(); ++c) {
        std::int32_t lo = graph_.check_offset[c], hi = graph_.check_offset[c + 1];
        std::int32_t deg = hi - lo;
        double sign = syndrome_[c] ? -1.0 : 1.0;
        if (deg == 1) {
            c2v_[lo] = sign * sat_;
            continue;
        }
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
    // variable pass: componentwise leave-one-out products of the 4-ary
    // likelihood vectors, again prefix/suffix so zeros stay local
    auto* vprefix = vscratch_.data();
    auto* vsuffix = vscratch_.data() + vscratch_.size() / 2;
    for (std::size_t v = 0; v < graph_.num_vars; ++v) {
        std::int32_t lo = graph_.var_offset[v], hi = graph_.var_offset[v + 1];
        std::int32_t deg = hi - lo;
        vprefix[0] = {1, 1, 1, 1};
        for (std::int32_t i = 0; i < deg; ++i) {
            std::int32_t e = graph_.var_edges[lo + i];
            double pc = 1.0 / (1.0 + std::exp(-c2v_[e]));
            double pa = 1.0 - pc;
            std::uint8_t mask = commute_mask(graph_.edge_is_x[e]);
            for (int j = 0; j < 4; ++j)
                vprefix[i + 1][j] = vprefix[i][j] * (((mask >> j) & 1) ? pc : pa);
        }
        vsuffix[deg] = {1, 1, 1, 1};
        for (std::int32_t i = deg - 1; i >= 0; --i) {
            std::int32_t e = graph_.var_edges[lo + i];
            double pc = 1.0 / (1.0 + std::exp(-c2v_[e]));
            double pa = 1.0 - pc;
            std::uint8_t mask = commute_mask(graph_.edge_is_x[e]);
            for (int j = 0; j < 4; ++j)
                vsuffix[i][j] = vsuffix[i + 1][j] * (((mask >> j) & 1) ? pc : pa);
        }
        // belief from the full product
        std::array<double, 4> q;
        double total = 0;
        for (int j = 0; j < 4; ++j) {
            q[j] = std::max(prior_[v][j] * vprefix[deg][j], kFloor);
            total += q[j];
        }
        for (int j = 0; j < 4; ++j) q[j] /= total;
        belief_[v] = q;
        int best = 0;
        for (int j = 1; j < 4; ++j)
            if (q[j] > q[best]) best = j;
        hard_[v] = static_cast<std::uint8_t>(best);
        // outgoing messages from the leave-one-out products
        for (std::int32_t i = 0; i < deg; ++i) {
            std::int32_t e = graph_.var_edges[lo + i];
            std::uint8_t mask = commute_mask(graph_.edge_is_x[e]);
            double comm = 0, anti = 0;
            for (int j = 0; j < 4; ++j) {
                double w = prior_[v][j] * vprefix[i][j] * vsuffix[i + 1][j];
                ((mask >> j) & 1 ? comm : anti) += w;
            }
            comm = std::max(comm, kFloor);
            anti = std::max(anti, kFloor);
            double m = std::log(comm / anti);
            v2c_[e] = std::fmin(sat_, std::fmax(-sat_, m));
        }
    }
}

int QbpEngine::run(int iters, bool check_initial, bool early_stop) {
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

QbpRunResult qbp_run(const QuatGraph& graph, const BitVector& syndrome, double p,
                     const QbpConfig& cfg) {
    QbpEngine engine(graph);
    std::vector<std::array<double, 4>> priors(graph.num_vars, depolarizing_prior(p));
    engine.reset(syndrome, priors);
    int used = engine.run(cfg.T, /*check_initial=*/true);
    QbpRunResult res;
    res.converged = engine.converged();
    res.hard = engine.hard();
    res.beliefs = engine.beliefs();
    res.iterations_used = used;
    return res;
}

QGdResult qbpgd_decode(const QuatGraph& graph, const BitVector& syndrome, double p,
                       const QGdConfig& cfg) {
    if (!(cfg.epsilon > 0 && cfg.epsilon < 0.25))
        throw std::invalid_argument("QGdConfig: epsilon must be in (0, 1/4)");
    if (cfg.T < 1) throw std::invalid_argument("QGdConfig: T must be >= 1");
    int R = cfg.R == 0 ? static_cast<int>(graph.num_vars) : cfg.R;
    if (R < 1 || R > static_cast<int>(graph.num_vars))
        throw std::invalid_argument("QGdConfig: R must be in [1, n]");

    QbpEngine engine(graph);
    std::vector<std::array<double, 4>> priors(graph.num_vars, depolarizing_prior(p));
    engine.reset(syndrome, priors);
    std::vector<std::uint8_t> decimated(graph.num_vars, 0);

    QGdResult res;
    for (int round = 1; round <= R; ++round) {
        engine.run(cfg.T, /*check_initial=*/round == 1);
        if (engine.converged()) {
            res.converged = true;
            res.estimate = engine.hard();
            res.rounds_used = round;
            return res;
        }
        const auto& beliefs = engine.beliefs();
        std::size_t best_v = graph.num_vars;
        double best_gamma = -1.0;
        for (std::size_t v = 0; v < graph.num_vars; ++v) {
            if (decimated[v]) continue;
            double g = beliefs[v][0];
            for (int j = 1; j < 4; ++j) g = std::max(g, beliefs[v][j]);
            if (g > best_gamma) {
                best_gamma = g;
                best_v = v;
            }
        }
        int sym = 0;
        for (int j = 1; j < 4; ++j)
            if (beliefs[best_v][j] > beliefs[best_v][sym]) sym = j;
        std::array<double, 4> pinned{cfg.epsilon, cfg.epsilon, cfg.epsilon, cfg.epsilon};
        pinned[sym] = 1.0 - cfg.epsilon;
        engine.set_prior(best_v, pinned);
        decimated[best_v] = 1;
        res.trace.emplace_back(static_cast<std::int32_t>(best_v), static_cast<std::uint8_t>(sym));
    }
    res.converged = false;
    res.rounds_used = R;
    return res;
}

}  // namespace bpgd
