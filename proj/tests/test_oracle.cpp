#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "bpgd/oracle.hpp"
#include "bpgd/rng.hpp"
#include "doctest.h"
#include "support/ref_gf2.hpp"
#include "support/stats.hpp"

using namespace bpgd;

namespace {

const char* kDataDir = BPGD_DATA_DIR;
const BitMatrix kSteaneH = BitMatrix::from_rows({"1110100", "0111010", "0010111"});

CssCode make_steane() { return CssCode("steane", kSteaneH, kSteaneH); }
CssCode make_hgp51() {
    BitMatrix rep = BitMatrix::from_rows({"11"});
    return hypergraph_product(rep, rep, "hgp_5_1");
}

double bitflip_weight(std::uint64_t x, std::size_t n, double p) {
    int w = std::popcount(x);
    return std::pow(p, w) * std::pow(1.0 - p, static_cast<double>(n) - w);
}

// Straight-line reference: filter all 2^n errors through the syndrome
// equation, no packing, no Gray code.
std::vector<double> naive_marginals(const BitMatrix& H, const BitVector& s, double p) {
    auto hm = refgf2::unpack(H);
    auto sv = refgf2::unpack(s);
    std::size_t n = H.cols();
    std::vector<double> w0(n, 0.0), w1(n, 0.0);
    for (std::uint64_t x = 0; x < (std::uint64_t(1) << n); ++x) {
        refgf2::Vec xv(n, 0);
        for (std::size_t i = 0; i < n; ++i) xv[i] = (x >> i) & 1;
        if (refgf2::mat_vec(hm, xv) != sv) continue;
        double w = bitflip_weight(x, n, p);
        for (std::size_t i = 0; i < n; ++i) (xv[i] ? w1[i] : w0[i]) += w;
    }
    std::vector<double> llr(n);
    for (std::size_t i = 0; i < n; ++i) llr[i] = std::log(w0[i] / w1[i]);
    return llr;
}

// Reference coset decomposition: canonical representative by brute-force
// lexicographic minimum over the whole coset.
std::map<std::string, double> naive_coset_masses(const CssCode& code, const BitVector& s,
                                                 double p, double* syndrome_prob) {
    auto hm = refgf2::unpack(code.H1());
    auto sv = refgf2::unpack(s);
    std::size_t n = code.n();
    std::vector<refgf2::Vec> span{refgf2::Vec(n, 0)};
    for (std::size_t r = 0; r < code.G2().rows(); ++r) {
        auto row = refgf2::unpack(code.G2().row(r));
        std::size_t count = span.size();
        for (std::size_t i = 0; i < count; ++i) {
            refgf2::Vec combo = span[i];
            for (std::size_t j = 0; j < n; ++j) combo[j] ^= row[j];
            if (std::find(span.begin(), span.end(), combo) == span.end()) span.push_back(combo);
        }
    }
    std::map<std::string, double> masses;
    double total = 0.0;
    for (std::uint64_t x = 0; x < (std::uint64_t(1) << n); ++x) {
        refgf2::Vec xv(n, 0);
        for (std::size_t i = 0; i < n; ++i) xv[i] = (x >> i) & 1;
        if (refgf2::mat_vec(hm, xv) != sv) continue;
        refgf2::Vec best = xv;
        for (const auto& g : span) {
            refgf2::Vec member = xv;
            for (std::size_t j = 0; j < n; ++j) member[j] ^= g[j];
            if (std::lexicographical_compare(member.begin(), member.end(), best.begin(),
                                             best.end()))
                best = member;
        }
        std::string key;
        for (auto b : best) key.push_back(b ? '1' : '0');
        double w = bitflip_weight(x, n, p);
        masses[key] += w;
        total += w;
    }
    for (auto& [key, mass] : masses) mass /= total;
    if (syndrome_prob) *syndrome_prob = total;
    return masses;
}

std::vector<std::array<double, 4>> naive_quaternary(const BitMatrix& H1, const BitMatrix& G2,
                                                    const BitVector& s, double p) {
    std::size_t n = H1.cols();
    std::vector<std::array<double, 4>> acc(n, {0, 0, 0, 0});
    double total = 0.0;
    std::vector<std::uint8_t> sym(n, 0);
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < n; ++i) count *= 4;
    for (std::uint64_t k = 0; k < count; ++k) {
        std::uint64_t t = k;
        for (std::size_t i = 0; i < n; ++i) {
            sym[i] = t & 3;
            t >>= 2;
        }
        bool match = true;
        for (std::size_t r = 0; r < H1.rows() && match; ++r) {
            unsigned parity = 0;
            for (std::size_t c = 0; c < n; ++c)
                if (H1.get(r, c) && (sym[c] == 1 || sym[c] == 2)) parity ^= 1;  // X or Y
            if (parity != s.get(r)) match = false;
        }
        for (std::size_t r = 0; r < G2.rows() && match; ++r) {
            unsigned parity = 0;
            for (std::size_t c = 0; c < n; ++c)
                if (G2.get(r, c) && (sym[c] == 2 || sym[c] == 3)) parity ^= 1;  // Y or Z
            if (parity != s.get(H1.rows() + r)) match = false;
        }
        if (!match) continue;
        double w = 1.0;
        for (std::size_t i = 0; i < n; ++i) w *= sym[i] == 0 ? 1.0 - p : p / 3.0;
        for (std::size_t i = 0; i < n; ++i) acc[i][sym[i]] += w;
        total += w;
    }
    for (auto& a : acc)
        for (auto& v : a) v /= total;
    return acc;
}

}  // namespace

TEST_CASE("chi-square helper reproduces table values") {
    CHECK(teststats::chi_square_p_value(0.0, 5) == doctest::Approx(1.0));
    CHECK(teststats::chi_square_p_value(3.841, 1) == doctest::Approx(0.05).epsilon(2e-3));
    CHECK(teststats::chi_square_p_value(18.307, 10) == doctest::Approx(0.05).epsilon(2e-3));
    CHECK(teststats::chi_square_p_value(23.209, 10) == doctest::Approx(0.01).epsilon(2e-3));
}

TEST_CASE("exact marginals match the naive full filter on random instances") {
    auto rng = make_rng(606);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t n = 3 + uniform_below(rng, 8);       // 3..10
        std::size_t rows = 1 + uniform_below(rng, n);    // keep syndromes mostly solvable
        BitMatrix H = refgf2::pack(refgf2::random_mat(rows, n, rng, 0.4));
        BitVector truth = refgf2::pack(refgf2::random_vec(n, rng, 0.3));
        BitVector s = mat_vec_mul(H, truth);
        double p = trial % 2 ? 0.1 : 0.23;
        auto got = oracle::exact_marginals(H, s, p);
        auto want = naive_marginals(H, s, p);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            if (std::isinf(want[i])) CHECK(got[i] == want[i]);
            else CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-11));
        }
    }
}

TEST_CASE("exact marginals report infinities for bits forced by the syndrome") {
    // Row 2 pins bit 1 directly: x1 = s2.
    BitMatrix H = BitMatrix::from_rows({"11", "01"});
    auto forced_one = oracle::exact_marginals(H, BitVector::from_string("01"), 0.1);
    CHECK(std::isinf(forced_one[1]));
    CHECK(forced_one[1] < 0);  // bit is 1 in every solution
    auto forced_zero = oracle::exact_marginals(H, BitVector::from_string("00"), 0.1);
    CHECK(std::isinf(forced_zero[1]));
    CHECK(forced_zero[1] > 0);
}

TEST_CASE("steane syndrome (1,1,1): frozen posterior, bit 3 alone leans to 1") {
    auto llr = oracle::exact_marginals(kSteaneH, BitVector::from_string("111"), 0.05);
    CHECK(llr[2] == doctest::Approx(-1.77860771591).epsilon(1e-9));
    for (std::size_t i = 0; i < 7; ++i)
        if (i != 2) CHECK(llr[i] == doctest::Approx(2.94443897916644).epsilon(1e-9));
}

TEST_CASE("coset table agrees with brute-force decomposition and sums to one") {
    auto rng = make_rng(707);
    CssCode steane = make_steane();
    CssCode hgp = make_hgp51();
    for (const CssCode* code : {&steane, &hgp}) {
        for (double p : {0.05, 0.2}) {
            BitVector truth = refgf2::pack(refgf2::random_vec(code->n(), rng, 0.3));
            BitVector s = mat_vec_mul(code->H1(), truth);
            oracle::CosetTable table = oracle::build_coset_table(*code, s, p);

            CHECK(table.entries.size() ==
                  (std::size_t{1} << (code->k1() - code->k2())));
            double mass_total = 0.0;
            for (const auto& e : table.entries) mass_total += e.mass;
            CHECK(mass_total == doctest::Approx(1.0).epsilon(1e-12));

            double syndrome_prob = 0.0;
            auto want = naive_coset_masses(*code, s, p, &syndrome_prob);
            CHECK(table.syndrome_probability == doctest::Approx(syndrome_prob).epsilon(1e-12));
            REQUIRE(table.entries.size() == want.size());
            for (const auto& e : table.entries) {
                auto it = want.find(e.representative.to_string());
                REQUIRE(it != want.end());  // representatives must be the lex minima
                CHECK(e.mass == doctest::Approx(it->second).epsilon(1e-11));
            }
        }
    }
}

TEST_CASE("syndrome probabilities over all syndromes cover the full error space") {
    CssCode code = make_steane();
    double covered = 0.0;
    for (std::uint64_t sbits = 0; sbits < 8; ++sbits) {
        BitVector s(3);
        for (std::size_t i = 0; i < 3; ++i)
            if ((sbits >> i) & 1) s.set(i, true);
        covered += oracle::build_coset_table(code, s, 0.1).syndrome_probability;
    }
    CHECK(covered == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("dqml on steane weight-1 errors: frozen canonical representatives, right cosets") {
    CssCode code = make_steane();
    const char* expected[7] = {"0001110", "0001101", "0000111", "0001000",
                               "0000100", "0000010", "0000001"};
    for (std::size_t q = 0; q < 7; ++q) {
        BitVector e(7);
        e.set(q, true);
        BitVector est = oracle::dqml_decode(code, mat_vec_mul(kSteaneH, e), 0.05);
        CHECK(est == BitVector::from_string(expected[q]));
        DecodeOutcome out = classify_x_outcome(code, e, est);
        CHECK((out == DecodeOutcome::SuccessExactMatch || out == DecodeOutcome::SuccessDegenerate));
    }
}

TEST_CASE("dqml breaks exact coset ties toward the lexicographically smaller representative") {
    // Two equal-mass singleton cosets {01} and {10}.
    CssCode code("rep2_free", BitMatrix::from_rows({"11"}), BitMatrix(0, 2));
    BitVector s(1);
    s.set(0, true);
    oracle::CosetTable table = oracle::build_coset_table(code, s, 0.1);
    REQUIRE(table.entries.size() == 2);
    CHECK(table.entries[0].mass == doctest::Approx(0.5));
    CHECK(table.entries[1].mass == doctest::Approx(0.5));
    CHECK(oracle::dqml_decode(code, s, 0.1) == BitVector::from_string("01"));

    // With G2 = [11] the two solutions merge into one coset whose canonical
    // representative is again 01.
    CssCode merged("rep2", BitMatrix::from_rows({"11"}), BitMatrix::from_rows({"11"}));
    CHECK(oracle::build_coset_table(merged, s, 0.1).entries.size() == 1);
    CHECK(oracle::dqml_decode(merged, s, 0.1) == BitVector::from_string("01"));
}

TEST_CASE("closed-form decoder error rates: frozen values and the factor-two sandwich") {
    CssCode steane = make_steane();
    CssCode hgp = make_hgp51();

    oracle::SamplingRates sr = oracle::sampling_error_rates(steane, 0.1);
    CHECK(sr.p_dqml == doctest::Approx(0.13064320000000018).epsilon(1e-12));
    CHECK(sr.p_s == doctest::Approx(0.19968653209896536).epsilon(1e-12));
    oracle::SamplingRates hr = oracle::sampling_error_rates(hgp, 0.01);
    CHECK(hr.p_dqml == doctest::Approx(0.019799999999999929).epsilon(1e-12));
    CHECK(hr.p_s == doctest::Approx(0.020184271396285647).epsilon(1e-12));

    for (const CssCode* code : {&steane, &hgp}) {
        for (double p : {0.01, 0.05, 0.1, 0.2}) {
            oracle::SamplingRates r = oracle::sampling_error_rates(*code, p);
            CHECK(r.p_dqml >= 0.0);
            CHECK(r.p_s <= 1.0);
            CHECK(r.p_dqml <= r.p_s + 1e-12);
            CHECK(r.p_s <= 2.0 * r.p_dqml + 1e-12);
        }
    }
}

TEST_CASE("golden regression file matches recomputed rates bit-for-bit within 1e-12") {
    auto rows = oracle::load_golden_rates(std::string(kDataDir) + "/golden/sampling_rates.txt");
    REQUIRE(rows.size() == 8);
    CssCode steane = make_steane();
    CssCode hgp = make_hgp51();
    for (const auto& row : rows) {
        REQUIRE((row.code == "steane" || row.code == "hgp_5_1"));
        const CssCode& code = row.code == "steane" ? steane : hgp;
        oracle::SamplingRates r = oracle::sampling_error_rates(code, row.p_x);
        CHECK(std::fabs(r.p_dqml - row.rates.p_dqml) <= 1e-12);
        CHECK(std::fabs(r.p_s - row.rates.p_s) <= 1e-12);
    }
    // The serializer and parser must round-trip doubles exactly.
    auto text = oracle::golden_rates_to_string(rows);
    auto reparsed = oracle::parse_golden_rates(text);
    REQUIRE(reparsed.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(reparsed[i].code == rows[i].code);
        CHECK(reparsed[i].p_x == rows[i].p_x);
        CHECK(reparsed[i].rates.p_dqml == rows[i].rates.p_dqml);
        CHECK(reparsed[i].rates.p_s == rows[i].rates.p_s);
    }
}

TEST_CASE("posterior sampling: unique solution is returned deterministically by both methods") {
    CssCode code("id2", BitMatrix::identity(2), BitMatrix(0, 2));
    BitVector s = BitVector::from_string("10");
    auto rng = make_rng(1);
    for (auto method : {oracle::SamplingMethod::Table, oracle::SamplingMethod::ChainRule})
        for (int k = 0; k < 10; ++k)
            CHECK(oracle::sampling_decode(code, s, 0.2, rng, method) ==
                  BitVector::from_string("10"));
}

TEST_CASE("posterior sampling matches the exact distribution for both methods") {
    CssCode code = make_steane();
    BitVector s = BitVector::from_string("111");
    const double p = 0.3;  // spreads mass well beyond the leading coset

    // Exact solution-set probabilities from the naive filter.
    std::map<std::string, double> exact;
    for (std::uint64_t x = 0; x < (1u << 7); ++x) {
        BitVector xv(7);
        for (std::size_t i = 0; i < 7; ++i)
            if ((x >> i) & 1) xv.set(i, true);
        if (mat_vec_mul(kSteaneH, xv) != s) continue;
        exact[xv.to_string()] = bitflip_weight(x, 7, p);
    }
    REQUIRE(exact.size() == 16);
    double total = 0.0;
    for (auto& [k, v] : exact) total += v;
    for (auto& [k, v] : exact) v /= total;

    for (auto method : {oracle::SamplingMethod::Table, oracle::SamplingMethod::ChainRule}) {
        auto rng = make_rng(method == oracle::SamplingMethod::Table ? 11 : 22);
        std::map<std::string, std::uint64_t> counts;
        const std::uint64_t draws = 20000;
        for (std::uint64_t k = 0; k < draws; ++k) {
            BitVector sample = oracle::sampling_decode(code, s, p, rng, method);
            CHECK(mat_vec_mul(kSteaneH, sample) == s);
            ++counts[sample.to_string()];
        }
        std::vector<std::uint64_t> observed;
        std::vector<double> expected;
        for (const auto& [key, prob] : exact) {
            observed.push_back(counts.count(key) ? counts[key] : 0);
            expected.push_back(prob);
        }
        double stat = teststats::chi_square_statistic(observed, expected);
        double pval = teststats::chi_square_p_value(stat, static_cast<double>(exact.size() - 1));
        CHECK(pval > 1e-3);

        // Reruns with the same seed reproduce the same stream.
        auto rng_a = make_rng(909);
        auto rng_b = make_rng(909);
        for (int k = 0; k < 5; ++k)
            CHECK(oracle::sampling_decode(code, s, p, rng_a, method) ==
                  oracle::sampling_decode(code, s, p, rng_b, method));
    }
}

TEST_CASE("quaternary marginals match the naive 4^n filter") {
    auto rng = make_rng(808);
    for (int trial = 0; trial < 10; ++trial) {
        std::size_t n = 2 + uniform_below(rng, 4);  // 2..5
        BitMatrix H1 = refgf2::pack(refgf2::random_mat(1 + uniform_below(rng, 2), n, rng, 0.5));
        BitMatrix G2 = refgf2::pack(refgf2::random_mat(1 + uniform_below(rng, 2), n, rng, 0.5));
        // Reachable syndrome: evaluate a random symbol string.
        std::vector<std::uint8_t> sym(n);
        for (auto& v : sym) v = static_cast<std::uint8_t>(uniform_below(rng, 4));
        BitVector s(H1.rows() + G2.rows());
        for (std::size_t r = 0; r < H1.rows(); ++r) {
            unsigned parity = 0;
            for (std::size_t c = 0; c < n; ++c)
                if (H1.get(r, c) && (sym[c] == 1 || sym[c] == 2)) parity ^= 1;
            s.set(r, parity);
        }
        for (std::size_t r = 0; r < G2.rows(); ++r) {
            unsigned parity = 0;
            for (std::size_t c = 0; c < n; ++c)
                if (G2.get(r, c) && (sym[c] == 2 || sym[c] == 3)) parity ^= 1;
            s.set(H1.rows() + r, parity);
        }
        double p = 0.15;
        auto got = oracle::exact_quaternary_marginals(H1, G2, s, p);
        auto want = naive_quaternary(H1, G2, s, p);
        REQUIRE(got.size() == want.size());
        for (std::size_t q = 0; q < n; ++q)
            for (int j = 0; j < 4; ++j)
                CHECK(got[q][j] == doctest::Approx(want[q][j]).epsilon(1e-11));
    }
}

TEST_CASE("enumeration guards reject oversized instances and unreachable syndromes") {
    CHECK_THROWS_WITH_AS((void)oracle::exact_marginals(BitMatrix(1, 25), BitVector(1), 0.1),
                         doctest::Contains("too large"), std::invalid_argument);
    CssCode big21("big21", BitMatrix(1, 21), BitMatrix(0, 21));
    CHECK_THROWS_WITH_AS((void)oracle::build_coset_table(big21, BitVector(1), 0.1),
                         doctest::Contains("too large"), std::invalid_argument);
    CssCode big17("big17", BitMatrix(1, 17), BitMatrix(0, 17));
    CHECK_THROWS_WITH_AS((void)oracle::sampling_error_rates(big17, 0.1),
                         doctest::Contains("too large"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        (void)oracle::exact_quaternary_marginals(BitMatrix(1, 8), BitMatrix(0, 8), BitVector(1), 0.1),
        doctest::Contains("too large"), std::invalid_argument);

    BitMatrix repeated = BitMatrix::from_rows({"11", "11"});
    CHECK_THROWS_WITH_AS(
        (void)oracle::exact_marginals(repeated, BitVector::from_string("10"), 0.1),
        doctest::Contains("syndrome not in the column space"), std::invalid_argument);
    CHECK_THROWS_AS((void)oracle::exact_marginals(kSteaneH, BitVector::from_string("111"), 0.0),
                    std::invalid_argument);
}
