#include "bpgd/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "bpgd/rng.hpp"

namespace bpgd::oracle {

namespace {

std::uint64_t pack(const BitVector& v) { return v.size() ? v.words()[0] : 0; }

BitVector unpack(std::uint64_t m, std::size_t n) {
    BitVector v(n);
    for (std::size_t i = 0; i < n; ++i)
        if ((m >> i) & 1) v.set(i, true);
    return v;
}

// p^w (1-p)^(n-w) for w = 0..n
std::vector<double> weight_table(double p, std::size_t n) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("oracle: probability must be in (0, 1)");
    std::vector<double> t(n + 1);
    for (std::size_t w = 0; w <= n; ++w)
        t[w] = std::pow(p, double(w)) * std::pow(1.0 - p, double(n - w));
    return t;
}

struct PackedAffineSet {
    std::uint64_t particular = 0;
    std::vector<std::uint64_t> basis;  // nullspace basis of H1

    // visit() gets every solution exactly once (Gray-code order)
    template <typename F>
    void for_each(F&& visit) const {
        std::uint64_t x = particular;
        std::uint64_t count = std::uint64_t(1) << basis.size();
        for (std::uint64_t k = 0;; ++k) {
            visit(x);
            if (k + 1 == count) break;
            x ^= basis[std::countr_zero(k + 1)];
        }
    }
};

PackedAffineSet solve_packed(const BitMatrix& H1, const BitVector& s, std::size_t max_n,
                             const char* who) {
    if (H1.cols() > max_n)
        throw std::invalid_argument(std::string(who) + ": instance too large to enumerate (n = " +
                                    std::to_string(H1.cols()) + ", limit " +
                                    std::to_string(max_n) + ")");
    AffineSolution sol = solve_linear(H1, s);
    if (!sol.solvable)
        throw std::invalid_argument(std::string(who) + ": syndrome not in the column space of H1");
    PackedAffineSet set;
    set.particular = pack(sol.particular);
    BitMatrix ns = nullspace_basis(H1);
    for (std::size_t r = 0; r < ns.rows(); ++r) set.basis.push_back(pack(ns.row(r)));
    return set;
}

// rowspace reduction on packed vectors: rows of the rref and their pivots
struct PackedReducer {
    std::vector<std::uint64_t> rows;
    std::vector<std::size_t> pivots;

    explicit PackedReducer(const RowSpace& space) {
        for (std::size_t i = 0; i < space.rank(); ++i) {
            rows.push_back(pack(space.rref().row(i)));
            pivots.push_back(space.pivot_cols()[i]);
        }
    }
    std::uint64_t reduce(std::uint64_t x) const {
        for (std::size_t i = 0; i < rows.size(); ++i)
            if ((x >> pivots[i]) & 1) x ^= rows[i];
        return x;
    }
};

bool packed_lex_less(std::uint64_t a, std::uint64_t b) {
    std::uint64_t diff = a ^ b;
    if (!diff) return false;
    std::uint64_t low = diff & (~diff + 1);  // lowest differing bit = most significant position
    return (b & low) != 0;
}

}  // namespace

std::vector<double> exact_marginals(const BitMatrix& H1, const BitVector& s, double p_x) {
    PackedAffineSet set = solve_packed(H1, s, 24, "exact_marginals");
    std::size_t n = H1.cols();
    std::vector<double> wt = weight_table(p_x, n);
    std::vector<double> w0(n, 0.0), w1(n, 0.0);
    set.for_each([&](std::uint64_t x) {
        double w = wt[std::popcount(x)];
        for (std::size_t i = 0; i < n; ++i)
            ((x >> i) & 1 ? w1[i] : w0[i]) += w;
    });
    std::vector<double> llr(n);
    for (std::size_t i = 0; i < n; ++i) llr[i] = std::log(w0[i] / w1[i]);
    return llr;
}

CosetTable build_coset_table(const CssCode& code, const BitVector& s, double p_x) {
    PackedAffineSet set = solve_packed(code.H1(), s, 20, "build_coset_table");
    std::vector<double> wt = weight_table(p_x, code.n());
    PackedReducer reducer(code.G2_space());

    std::map<std::uint64_t, double> masses;
    double total = 0.0;
    set.for_each([&](std::uint64_t x) {
        double w = wt[std::popcount(x)];
        masses[reducer.reduce(x)] += w;
        total += w;
    });
    CosetTable table;
    table.syndrome_probability = total;
    table.entries.reserve(masses.size());
    for (const auto& [rep, mass] : masses)
        table.entries.push_back({unpack(rep, code.n()), mass / total});
    return table;
}

BitVector dqml_decode(const CssCode& code, const BitVector& s, double p_x) {
    CosetTable table = build_coset_table(code, s, p_x);
    const CosetEntry* best = &table.entries.front();
    for (const CosetEntry& e : table.entries) {
        if (e.mass > best->mass ||
            (e.mass == best->mass && e.representative.lex_less(best->representative)))
            best = &e;
    }
    return best->representative;
}

SamplingRates sampling_error_rates(const CssCode& code, double p_x) {
    std::size_t n = code.n();
    if (n > 16)
        throw std::invalid_argument("sampling_error_rates: instance too large (n = " +
                                    std::to_string(n) + ", limit 16)");
    std::vector<double> wt = weight_table(p_x, n);
    PackedReducer reducer(code.G2_space());

    // per-bit syndrome contributions: syndrome(x) = xor of columns of H1
    std::size_t rows = code.H1().rows();
    if (rows > 48)
        throw std::invalid_argument("sampling_error_rates: too many H1 rows to pack");
    std::vector<std::uint64_t> col_syndrome(n, 0);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < n; ++c)
            if (code.H1().get(r, c)) col_syndrome[c] |= std::uint64_t(1) << r;
    std::vector<std::uint64_t> col_residue(n, 0);
    for (std::size_t c = 0; c < n; ++c)
        col_residue[c] = reducer.reduce(std::uint64_t(1) << c);

    // Gray-code scan of all 2^n errors; joint[(s, residue)] = Pr(s, coset)
    std::map<std::pair<std::uint64_t, std::uint64_t>, double> joint;
    std::uint64_t x = 0, syn = 0, res = 0;
    std::uint64_t count = std::uint64_t(1) << n;
    for (std::uint64_t k = 0;; ++k) {
        joint[{syn, res}] += wt[std::popcount(x)];
        if (k + 1 == count) break;
        std::size_t bit = std::countr_zero(k + 1);
        x ^= std::uint64_t(1) << bit;
        syn ^= col_syndrome[bit];
        res ^= col_residue[bit];
    }

    // keys are grouped by syndrome (map order), so a single pass accumulates
    // each syndrome's total, max and sum of squares
    SamplingRates rates;
    double sum_max = 0.0, sum_sq_norm = 0.0;
    auto it = joint.begin();
    while (it != joint.end()) {
        std::uint64_t syn_cur = it->first.first;
        double total = 0.0, best = 0.0, sumsq = 0.0;
        for (; it != joint.end() && it->first.first == syn_cur; ++it) {
            total += it->second;
            best = std::max(best, it->second);
            sumsq += it->second * it->second;
        }
        sum_max += best;               // Pr(s) * max_c Pr(c|s) = max_c Pr(s, c)
        sum_sq_norm += sumsq / total;  // Pr(s) * sum_c Pr(c|s)^2
    }
    rates.p_dqml = 1.0 - sum_max;
    rates.p_s = 1.0 - sum_sq_norm;
    return rates;
}

BitVector sampling_decode(const CssCode& code, const BitVector& s, double p_x,
                          std::mt19937_64& rng, SamplingMethod method) {
    PackedAffineSet set = solve_packed(code.H1(), s, 20, "sampling_decode");
    std::size_t n = code.n();
    std::vector<double> wt = weight_table(p_x, n);

    std::vector<std::uint64_t> sols;
    std::vector<double> weights;
    double total = 0.0;
    set.for_each([&](std::uint64_t x) {
        sols.push_back(x);
        double w = wt[std::popcount(x)];
        weights.push_back(w);
        total += w;
    });

    if (method == SamplingMethod::Table) {
        double u = uniform_unit(rng) * total;
        double acc = 0.0;
        for (std::size_t i = 0; i < sols.size(); ++i) {
            acc += weights[i];
            if (u < acc) return unpack(sols[i], n);
        }
        return unpack(sols.back(), n);  // u landed on accumulated rounding slack
    }

    // chain rule: fix bits left to right, conditioning the candidate set
    std::vector<std::uint32_t> alive(sols.size());
    for (std::uint32_t i = 0; i < alive.size(); ++i) alive[i] = i;
    std::uint64_t chosen = 0;
    for (std::size_t bit = 0; bit < n; ++bit) {
        double w1 = 0.0, wall = 0.0;
        for (std::uint32_t i : alive) {
            wall += weights[i];
            if ((sols[i] >> bit) & 1) w1 += weights[i];
        }
        double p1 = w1 / wall;
        bool one = uniform_unit(rng) < p1;
        if (one) chosen |= std::uint64_t(1) << bit;
        std::vector<std::uint32_t> next;
        next.reserve(alive.size());
        for (std::uint32_t i : alive)
            if (((sols[i] >> bit) & 1) == static_cast<std::uint64_t>(one)) next.push_back(i);
        alive.swap(next);
    }
    return unpack(chosen, n);
}

std::vector<std::array<double, 4>> exact_quaternary_marginals(const BitMatrix& H1,
                                                              const BitMatrix& G2,
                                                              const BitVector& s, double p) {
    std::size_t n = H1.cols();
    if (n > 7)
        throw std::invalid_argument("exact_quaternary_marginals: instance too large (n = " +
                                    std::to_string(n) + ", limit 7)");
    if (G2.rows() > 0 && G2.cols() != n)
        throw std::invalid_argument("exact_quaternary_marginals: column mismatch");
    if (s.size() != H1.rows() + G2.rows())
        throw std::invalid_argument("exact_quaternary_marginals: syndrome length mismatch");
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("exact_quaternary_marginals: probability must be in (0, 1)");

    std::vector<std::uint32_t> h1_rows(H1.rows(), 0), g2_rows(G2.rows(), 0);
    for (std::size_t r = 0; r < H1.rows(); ++r)
        for (std::size_t c = 0; c < n; ++c)
            if (H1.get(r, c)) h1_rows[r] |= 1u << c;
    for (std::size_t r = 0; r < G2.rows(); ++r)
        for (std::size_t c = 0; c < n; ++c)
            if (G2.get(r, c)) g2_rows[r] |= 1u << c;

    std::vector<std::array<double, 4>> acc(n, {0, 0, 0, 0});
    double total = 0.0;
    std::vector<std::uint8_t> q(n, 0);
    std::uint64_t patterns = std::uint64_t(1) << (2 * n);
    for (std::uint64_t code_word = 0; code_word < patterns; ++code_word) {
        std::uint32_t xmask = 0, zmask = 0;
        std::size_t weight = 0;
        for (std::size_t i = 0; i < n; ++i) {
            std::uint8_t sym = (code_word >> (2 * i)) & 3;
            q[i] = sym;
            if (sym == 1 || sym == 2) xmask |= 1u << i;
            if (sym == 2 || sym == 3) zmask |= 1u << i;
            if (sym) ++weight;
        }
        bool match = true;
        for (std::size_t r = 0; r < h1_rows.size() && match; ++r)
            match = ((std::popcount(h1_rows[r] & xmask) & 1) == static_cast<int>(s.get(r)));
        for (std::size_t r = 0; r < g2_rows.size() && match; ++r)
            match = ((std::popcount(g2_rows[r] & zmask) & 1) ==
                     static_cast<int>(s.get(h1_rows.size() + r)));
        if (!match) continue;
        double w = std::pow(1.0 - p, double(n - weight)) * std::pow(p / 3.0, double(weight));
        total += w;
        for (std::size_t i = 0; i < n; ++i) acc[i][q[i]] += w;
    }
    if (total <= 0.0)
        throw std::invalid_argument("exact_quaternary_marginals: syndrome unreachable");
    for (auto& m : acc)
        for (double& v : m) v /= total;
    return acc;
}

std::string golden_rates_to_string(std::span<const GoldenRate> rows) {
    std::ostringstream out;
    char buf[128];
    for (const GoldenRate& r : rows) {
        std::snprintf(buf, sizeof buf, "%s %.17g %.17g %.17g\n", r.code.c_str(), r.p_x,
                      r.rates.p_dqml, r.rates.p_s);
        out << buf;
    }
    return out.str();
}

std::vector<GoldenRate> parse_golden_rates(const std::string& text) {
    std::vector<GoldenRate> rows;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        GoldenRate r;
        if (!(ss >> r.code)) continue;  // blank
        if (!(ss >> r.p_x >> r.rates.p_dqml >> r.rates.p_s))
            throw std::runtime_error("golden rates line " + std::to_string(lineno) +
                                     ": expected '<code> <p_x> <P_DQML> <P_S>'");
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<GoldenRate> load_golden_rates(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open golden rates file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_golden_rates(ss.str());
}

}  // namespace bpgd::oracle
