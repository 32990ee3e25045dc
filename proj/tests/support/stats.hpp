#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>

// Minimal statistics helpers for the tests: Pearson chi-square goodness of
// fit with the p-value computed from the regularized upper incomplete gamma
// function (series + modified-Lentz continued fraction).

namespace teststats {

// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
inline double gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("gamma_q: need a > 0, x >= 0");
    if (x == 0.0) return 1.0;
    const double gln = std::lgamma(a);
    if (x < a + 1.0) {
        // Lower series for P(a, x); Q = 1 - P.
        double ap = a, term = 1.0 / a, sum = term;
        for (int i = 0; i < 1000; ++i) {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
        }
        return 1.0 - sum * std::exp(-x + a * std::log(x) - gln);
    }
    // Continued fraction for Q(a, x), modified Lentz.
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i <= 1000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - gln) * h;
}

// Survival function of the chi-square distribution with `dof` degrees of
// freedom, evaluated at `statistic`.
inline double chi_square_p_value(double statistic, double dof) {
    return gamma_q(dof / 2.0, statistic / 2.0);
}

// Pearson statistic for observed counts against expected probabilities.
// Cells with zero expected probability must have zero observed count.
inline double chi_square_statistic(std::span<const std::uint64_t> observed,
                                   std::span<const double> expected_prob) {
    if (observed.size() != expected_prob.size())
        throw std::invalid_argument("chi_square_statistic: size mismatch");
    std::uint64_t total = 0;
    for (auto o : observed) total += o;
    double stat = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double expect = expected_prob[i] * static_cast<double>(total);
        if (expect <= 0.0) {
            if (observed[i] != 0)
                throw std::invalid_argument("chi_square_statistic: mass in a zero-probability cell");
            continue;
        }
        const double diff = static_cast<double>(observed[i]) - expect;
        stat += diff * diff / expect;
    }
    return stat;
}

}  // namespace teststats
