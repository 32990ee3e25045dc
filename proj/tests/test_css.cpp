#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "bpgd/css.hpp"
#include "doctest.h"

using namespace bpgd;

namespace {

const char* kDataDir = BPGD_DATA_DIR;

CssCode make_steane() {
    BitMatrix H = BitMatrix::from_rows({"1110100", "0111010", "0010111"});
    return CssCode("steane", H, H);
}

PauliVector single(std::size_t n, std::size_t qubit, char pauli) {
    PauliVector p(n);
    if (pauli == 'X' || pauli == 'Y') p.x.set(qubit, true);
    if (pauli == 'Z' || pauli == 'Y') p.z.set(qubit, true);
    return p;
}

}  // namespace

TEST_CASE("symplectic inner product distinguishes commuting and anticommuting paulis") {
    CHECK(symplectic_inner(single(2, 0, 'X'), single(2, 0, 'Z')) == 1);
    CHECK(symplectic_inner(single(2, 0, 'X'), single(2, 1, 'Z')) == 0);
    CHECK(symplectic_inner(single(2, 0, 'X'), single(2, 0, 'X')) == 0);
    CHECK(symplectic_inner(single(2, 0, 'Y'), single(2, 0, 'X')) == 1);
    CHECK(symplectic_inner(single(2, 0, 'Y'), single(2, 0, 'Z')) == 1);
    CHECK(symplectic_inner(single(2, 0, 'Y'), single(2, 0, 'Y')) == 0);
}

TEST_CASE("self-dual steane construction yields the expected dimensions") {
    CssCode code = make_steane();
    CHECK(code.n() == 7);
    CHECK(code.k1() == 4);
    CHECK(code.k2() == 3);
    CHECK(code.k() == 1);
    CHECK(code.m() == 6);
}

TEST_CASE("construction rejects anticommuting stabilizers and names the first offending pair") {
    BitMatrix H1 = BitMatrix::from_rows({"1100", "0110"});
    // G2 row 0 commutes with everything; row 1 overlaps H1 row 0 in one spot.
    BitMatrix G2 = BitMatrix::from_rows({"1111", "0100"});
    CHECK_THROWS_WITH_AS(CssCode("bad", H1, G2),
                         doctest::Contains("G2 row 1 anticommutes with H1 row 0"),
                         std::invalid_argument);
}

TEST_CASE("full syndrome concatenates the X-detecting block before the Z-detecting block") {
    // Asymmetric code so the two blocks cannot be confused: H1 checks qubits
    // {1,2}, G2 checks {3,4} (they commute because the supports are disjoint).
    CssCode code("asym", BitMatrix::from_rows({"1100"}), BitMatrix::from_rows({"0011"}));
    PauliVector e(4);
    e.x.set(0, true);  // trips the H1 check
    e.z.set(2, true);  // trips the G2 check
    BitVector s = syndrome_full(code, e);
    REQUIRE(s.size() == 2);
    CHECK(s.get(0));
    CHECK(s.get(1));
    // Swapping the roles must flip both syndrome bits off.
    PauliVector quiet(4);
    quiet.x.set(2, true);  // H1 does not touch qubit 3
    quiet.z.set(0, true);  // G2 does not touch qubit 1
    CHECK(!syndrome_full(code, quiet).any());
}

TEST_CASE("bit-flip outcome classification covers all four verdicts") {
    CssCode code = make_steane();
    BitVector e3 = BitVector::from_string("0010000");

    CHECK(classify_x_outcome(code, e3, std::nullopt) == DecodeOutcome::FailureNonConvergence);
    CHECK(classify_x_outcome(code, e3, e3) == DecodeOutcome::SuccessExactMatch);

    BitVector degenerate = e3 ^ code.G2().row(0);
    CHECK(classify_x_outcome(code, e3, degenerate) == DecodeOutcome::SuccessDegenerate);

    // 0110110 has the same syndrome as e3 but differs by a logical operator;
    // it is the estimate plain BP actually converges to on this instance.
    BitVector logical = BitVector::from_string("0110110");
    REQUIRE(syndrome_x(code, logical) == syndrome_x(code, e3));
    CHECK(classify_x_outcome(code, e3, logical) == DecodeOutcome::FailureLogical);

    CHECK_THROWS_WITH_AS(classify_x_outcome(code, e3, BitVector::from_string("1000000")),
                         doctest::Contains("decoder contract violation"), std::invalid_argument);
}

TEST_CASE("quaternary outcome classification checks both residual components") {
    CssCode code = make_steane();
    PauliVector truth = single(7, 2, 'Y');

    CHECK(classify_quaternary_outcome(code, truth, std::nullopt) ==
          DecodeOutcome::FailureNonConvergence);
    CHECK(classify_quaternary_outcome(code, truth, truth) == DecodeOutcome::SuccessExactMatch);

    // Multiply by one X-type and one Z-type stabilizer generator.
    PauliVector degenerate = truth;
    degenerate.x ^= code.G2().row(1);
    degenerate.z ^= code.H1().row(2);
    CHECK(classify_quaternary_outcome(code, truth, degenerate) == DecodeOutcome::SuccessDegenerate);

    // Offset the X component by 0100110: syndrome-neutral but outside the
    // stabilizer group, i.e. a logical X.
    PauliVector logical = truth;
    logical.x ^= BitVector::from_string("0100110");
    REQUIRE(syndrome_full(code, logical) == syndrome_full(code, truth));
    CHECK(classify_quaternary_outcome(code, truth, logical) == DecodeOutcome::FailureLogical);

    PauliVector mismatched = truth;
    mismatched.x.flip(0);
    CHECK_THROWS_WITH_AS(classify_quaternary_outcome(code, truth, mismatched),
                         doctest::Contains("decoder contract violation"), std::invalid_argument);
}

TEST_CASE("outcome names used in reports are stable") {
    CHECK(std::string(to_string(DecodeOutcome::FailureNonConvergence)) == "nonconvergence");
    CHECK(std::string(to_string(DecodeOutcome::SuccessExactMatch)) == "exact-match");
    CHECK(std::string(to_string(DecodeOutcome::SuccessDegenerate)) == "degenerate");
    CHECK(std::string(to_string(DecodeOutcome::FailureLogical)) == "logical");
}

TEST_CASE("hypergraph product of the 1x2 repetition check yields the [[5,1]] code") {
    BitMatrix rep = BitMatrix::from_rows({"11"});
    CssCode code = hypergraph_product(rep, rep, "hgp_5_1");
    CHECK(code.n() == 5);
    CHECK(code.k() == 1);
    CHECK(serialize_code(code) == "css hgp_5_1 5 2 2\n1 3 5\n2 4 5\n1 2 5\n3 4 5\n");

    // The shipped fixture must stay in sync with the constructor.
    CssCode loaded = load_code_file(std::string(kDataDir) + "/hgp_5_1.code");
    CHECK(serialize_code(loaded) == serialize_code(code));
}

TEST_CASE("hypergraph product dimensions follow n = na*nb + ma*mb for unequal factors") {
    BitMatrix a = BitMatrix::from_rows({"110", "011"});  // 2x3 repetition chain
    BitMatrix b = BitMatrix::from_rows({"11"});          // 1x2
    CssCode code = hypergraph_product(a, b, "hgp_rect");
    CHECK(code.n() == 3 * 2 + 2 * 1);
    CHECK(code.H1().rows() == 2 * 2);
    CHECK(code.G2().rows() == 3 * 1);
    CHECK(code.k() == (3 - 2) * (2 - 1));  // product of the factor code dimensions
}

TEST_CASE("steane fixture file parses with comments and matches the in-code matrices") {
    CssCode code = load_code_file(std::string(kDataDir) + "/steane.code");
    CssCode expected = make_steane();
    CHECK(code.H1() == expected.H1());
    CHECK(code.G2() == expected.G2());
    CHECK(code.name() == "steane");
    CHECK(code.k() == 1);
}

TEST_CASE("code files survive a save/load round trip") {
    CssCode code = hypergraph_product(BitMatrix::from_rows({"110", "011"}),
                                      BitMatrix::from_rows({"11"}), "hgp_rect");
    const std::string path = "/tmp/bpgd_test_roundtrip.code";
    save_code_file(code, path);
    CssCode loaded = load_code_file(path);
    CHECK(loaded.H1() == code.H1());
    CHECK(loaded.G2() == code.G2());
    CHECK(loaded.name() == code.name());
    std::remove(path.c_str());
}

TEST_CASE("code file parse errors carry the source name, line number and reason") {
    auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return parse_code_file(in, "fixture");
    };
    CHECK_THROWS_WITH_AS(parse(""), doctest::Contains("expected 'css' header"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse("stabilizer x 7 3 3\n"), doctest::Contains("fixture:1"),
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(parse("css t 4 1 0\n3 1\n"),
                         doctest::Contains("strictly ascending"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse("css t 4 1 0\n0 2\n"), doctest::Contains("out of range"),
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(parse("css t 4 1 0\n2 5\n"),
                         doctest::Contains("column index 5 out of range [1, 4]"),
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(parse("css t 4 2 0\n1 2\n"),
                         doctest::Contains("unexpected end of file"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse("css t 4 1 0\n1 2\n3 4\n"),
                         doctest::Contains("trailing content"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse("css t 4 1 0\n1 x\n"),
                         doctest::Contains("expected integer column index"), std::runtime_error);
    // Line numbers must account for skipped comments and blanks.
    CHECK_THROWS_WITH_AS(parse("# banner\n\ncss t 4 1 0\n# note\n3 1\n"),
                         doctest::Contains("fixture:5"), std::runtime_error);
}

TEST_CASE("alist fixture loads and reproduces the [[5,1]] product") {
    BitMatrix rep = load_alist(std::string(kDataDir) + "/rep_1x2.alist");
    REQUIRE(rep.rows() == 1);
    REQUIRE(rep.cols() == 2);
    CHECK(rep.get(0, 0));
    CHECK(rep.get(0, 1));
    CssCode code = hypergraph_product(rep, rep, "hgp_5_1");
    CHECK(serialize_code(code) == "css hgp_5_1 5 2 2\n1 3 5\n2 4 5\n1 2 5\n3 4 5\n");
}

TEST_CASE("alist parser rejects inconsistent column and row lists") {
    auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return parse_alist(in, "fixture");
    };
    // Valid 2x2 identity-ish matrix for reference.
    CHECK(parse("2 2\n1 1\n1 1\n1 1\n1\n2\n1\n2\n").rows() == 2);
    // Row lists describe a different matrix than the column lists.
    CHECK_THROWS_WITH_AS(parse("2 2\n1 1\n1 1\n1 1\n1\n2\n2\n1\n"),
                         doctest::Contains("describe different matrices"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse("2 2\n1 1\n1 1\n1 1\n1\n3\n1\n2\n"),
                         doctest::Contains("row index out of range"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse("2 2\n1 1\n2 1\n1 1\n1\n2\n1\n2\n"),
                         doctest::Contains("column degree mismatch"), std::runtime_error);
}
