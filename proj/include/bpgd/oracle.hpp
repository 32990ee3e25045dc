#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "bpgd/css.hpp"
#include "bpgd/gf2.hpp"

// Exact small-instance references: exhaustive enumeration of the affine
// solution set {x : H1 x = s}, coset decomposition modulo rowspace(G2), the
// degenerate maximum-likelihood rule, and closed-form sampling-decoder error
// rates. Guards reject instances too large to enumerate.

namespace bpgd::oracle {

// Per-bit posterior LLR log(Pr(x_i=0|s)/Pr(x_i=1|s)) under i.i.d. bit-flip
// noise, by exhaustive enumeration. Requires n <= 24 and a solvable syndrome.
// Entries are +/-inf when a bit is constant across the solution set.
std::vector<double> exact_marginals(const BitMatrix& H1, const BitVector& s, double p_x);

struct CosetEntry {
    BitVector representative;  // lexicographically smallest member
    double mass = 0.0;         // conditional probability of the coset given s
};

struct CosetTable {
    std::vector<CosetEntry> entries;  // every coset of rowspace(G2) within {x : H1 x = s}
    double syndrome_probability = 0.0;
};

// Requires n <= 20 and a solvable syndrome. Entry masses sum to 1; the number
// of entries is 2^(k1 - k2).
CosetTable build_coset_table(const CssCode& code, const BitVector& s, double p_x);

// Degenerate maximum likelihood: representative of the most probable coset,
// ties broken toward the lexicographically smallest representative.
BitVector dqml_decode(const CssCode& code, const BitVector& s, double p_x);

struct SamplingRates {
    double p_dqml = 0.0;  // 1 - sum_s Pr(s) max_coset Pr(coset|s)
    double p_s = 0.0;     // 1 - sum_s Pr(s) sum_coset Pr(coset|s)^2
};

// Closed-form block error rates of the DQML decoder and of the stochastic
// sampling decoder that draws an error from the posterior. Requires n <= 16.
// Always satisfies p_dqml <= p_s <= 2 * p_dqml.
SamplingRates sampling_error_rates(const CssCode& code, double p_x);

enum class SamplingMethod : std::uint8_t { Table = 0, ChainRule = 1 };

// Draw an error from Pr(x | s) under bit-flip noise, either by a categorical
// draw over the enumerated solution set or by sampling bits one at a time via
// the chain rule. Both methods induce the same distribution.
BitVector sampling_decode(const CssCode& code, const BitVector& s, double p_x,
                          std::mt19937_64& rng, SamplingMethod method);

// Per-qubit symbol posteriors Pr(Q_i = j | s) under depolarizing noise, by
// enumeration of all 4^n Pauli errors. Requires n <= 7.
std::vector<std::array<double, 4>> exact_quaternary_marginals(const BitMatrix& H1,
                                                              const BitMatrix& G2,
                                                              const BitVector& s, double p);

// Golden-value regression files: lines of "<code> <p_x> <P_DQML> <P_S>".
struct GoldenRate {
    std::string code;
    double p_x = 0.0;
    SamplingRates rates;
};
std::string golden_rates_to_string(std::span<const GoldenRate> rows);
std::vector<GoldenRate> parse_golden_rates(const std::string& text);
std::vector<GoldenRate> load_golden_rates(const std::string& path);

}  // namespace bpgd::oracle
