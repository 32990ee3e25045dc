#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <random>
#include <vector>

#include "bpgd/gf2.hpp"
#include "bpgd/rng.hpp"
#include "doctest.h"
#include "support/ref_gf2.hpp"

using namespace bpgd;
using refgf2::Mat;
using refgf2::Vec;

namespace {

const BitMatrix kSteaneH = BitMatrix::from_rows({
    "1110100",
    "0111010",
    "0010111",
});

}  // namespace

TEST_CASE("bit vector semantics match a byte-per-bit reference across word boundaries") {
    auto rng = make_rng(101);
    for (std::size_t n : {std::size_t{1}, std::size_t{5}, std::size_t{63}, std::size_t{64},
                          std::size_t{65}, std::size_t{127}, std::size_t{128}, std::size_t{130}}) {
        Vec a = refgf2::random_vec(n, rng);
        Vec b = refgf2::random_vec(n, rng);
        BitVector pa = refgf2::pack(a), pb = refgf2::pack(b);

        std::size_t wa = 0;
        for (auto bit : a) wa += bit;
        CHECK(pa.weight() == wa);
        CHECK(pa.any() == (wa > 0));

        Vec x = a;
        for (std::size_t i = 0; i < n; ++i) x[i] ^= b[i];
        CHECK((pa ^ pb) == refgf2::pack(x));

        bool ref_less = std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
        CHECK(pa.lex_less(pb) == ref_less);

        unsigned dot = 0;
        for (std::size_t i = 0; i < n; ++i) dot ^= a[i] & b[i];
        CHECK(BitVector::dot(pa, pb) == (dot == 1));

        std::vector<std::size_t> sup;
        for (std::size_t i = 0; i < n; ++i)
            if (a[i]) sup.push_back(i);
        CHECK(pa.support() == sup);
        CHECK(BitVector::from_support(n, sup) == pa);
        CHECK(BitVector::from_string(pa.to_string()) == pa);
    }
}

TEST_CASE("flip and set maintain the zero-pad invariant used by whole-word operations") {
    BitVector v(70);
    v.set(69, true);
    v.flip(64);
    CHECK(v.weight() == 2);
    v.flip(69);
    v.set(64, false);
    CHECK(!v.any());
    CHECK(v == BitVector(70));  // whole-word equality only works if pads stay zero
}

TEST_CASE("lexicographic order treats position 0 as most significant") {
    CHECK(BitVector::from_string("01").lex_less(BitVector::from_string("10")));
    CHECK(!BitVector::from_string("10").lex_less(BitVector::from_string("01")));
    CHECK(!BitVector::from_string("10").lex_less(BitVector::from_string("10")));
    CHECK_THROWS_AS((void)BitVector::from_string("1").lex_less(BitVector::from_string("10")),
                    std::invalid_argument);
}

TEST_CASE("steane parity checks: frozen syndromes, rank, nullspace dimension") {
    auto e = [](std::size_t i) {
        BitVector v(7);
        v.set(i - 1, true);
        return v;
    };
    CHECK(mat_vec_mul(kSteaneH, e(3)) == BitVector::from_string("111"));
    CHECK(mat_vec_mul(kSteaneH, e(1) ^ e(2)) == BitVector::from_string("010"));
    CHECK(rank(kSteaneH) == 3);

    BitMatrix ns = nullspace_basis(kSteaneH);
    CHECK(ns.rows() == 4);
    for (std::size_t r = 0; r < ns.rows(); ++r)
        CHECK(!mat_vec_mul(kSteaneH, ns.row(r)).any());
    CHECK(rank(ns) == 4);
}

TEST_CASE("row-space membership on a hand-checked 2x3 system") {
    BitMatrix M = BitMatrix::from_rows({"110", "011"});
    CHECK(in_row_space(M, BitVector::from_string("101")));  // sum of both rows
    CHECK(in_row_space(M, BitVector::from_string("000")));
    CHECK(!in_row_space(M, BitVector::from_string("100")));
}

TEST_CASE("rank, products, membership and solvability agree with naive elimination") {
    auto rng = make_rng(202);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t rows = 1 + uniform_below(rng, 12);
        std::size_t cols = 1 + uniform_below(rng, 18);
        double density = trial % 2 ? 0.5 : 0.2;
        Mat m = refgf2::random_mat(rows, cols, rng, density);
        BitMatrix M = refgf2::pack(m);

        CHECK(rank(M) == refgf2::rank(m));

        Vec x = refgf2::random_vec(cols, rng);
        CHECK(mat_vec_mul(M, refgf2::pack(x)) == refgf2::pack(refgf2::mat_vec(m, x)));

        Vec probe = refgf2::random_vec(cols, rng);
        CHECK(in_row_space(M, refgf2::pack(probe)) == refgf2::in_row_space(m, probe));

        // The nullspace basis must be independent, the right size, and inside
        // the kernel.
        BitMatrix ns = nullspace_basis(M);
        CHECK(ns.rows() == cols - rank(M));
        for (std::size_t r = 0; r < ns.rows(); ++r)
            CHECK(!mat_vec_mul(M, ns.row(r)).any());
        if (ns.rows() > 0) CHECK(rank(ns) == ns.rows());

        // Solvable instance built from a known solution.
        BitVector s = mat_vec_mul(M, refgf2::pack(x));
        AffineSolution sol = solve_linear(M, s);
        REQUIRE(sol.solvable);
        CHECK(mat_vec_mul(M, sol.particular) == s);

        // Random right-hand side: agree with the augmented-rank criterion.
        Vec rhs = refgf2::random_vec(rows, rng);
        AffineSolution maybe = solve_linear(M, refgf2::pack(rhs));
        CHECK(maybe.solvable == refgf2::solvable(m, rhs));
        if (maybe.solvable) CHECK(mat_vec_mul(M, maybe.particular) == refgf2::pack(rhs));
    }
}

TEST_CASE("transpose, stacking and kronecker products match index-by-index construction") {
    auto rng = make_rng(303);
    Mat a = refgf2::random_mat(3, 5, rng);
    Mat b = refgf2::random_mat(2, 4, rng);
    BitMatrix A = refgf2::pack(a), B = refgf2::pack(b);

    BitMatrix At = A.transpose();
    REQUIRE(At.rows() == 5);
    for (std::size_t r = 0; r < 5; ++r)
        for (std::size_t c = 0; c < 3; ++c) CHECK(At.get(r, c) == A.get(c, r));

    Mat h(3, Vec(9, 0));
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 9; ++c) h[r][c] = c < 5 ? a[r][c] : (r < 2 ? b[r][c - 5] : 0);
    // hstack requires equal row counts; pad b with a zero row first.
    Mat b3 = b;
    b3.push_back(Vec(4, 0));
    CHECK(A.hstack(refgf2::pack(b3)) == refgf2::pack(h));

    Mat v = a;
    Mat a2 = refgf2::random_mat(2, 5, rng);
    for (const auto& row : a2) v.push_back(row);
    CHECK(A.vstack(refgf2::pack(a2)) == refgf2::pack(v));

    BitMatrix K = A.kronecker(B);
    REQUIRE(K.rows() == 6);
    REQUIRE(K.cols() == 20);
    for (std::size_t r = 0; r < 6; ++r)
        for (std::size_t c = 0; c < 20; ++c)
            CHECK(K.get(r, c) == (a[r / 2][c / 4] & b[r % 2][c % 4]));
    CHECK(BitMatrix::identity(3).kronecker(BitMatrix::identity(4)) == BitMatrix::identity(12));
}

TEST_CASE("row-space reduction returns the lexicographically smallest coset member") {
    auto rng = make_rng(404);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t cols = 4 + uniform_below(rng, 6);
        Mat g = refgf2::random_mat(1 + uniform_below(rng, 4), cols, rng);
        BitMatrix G = refgf2::pack(g);
        RowSpace space(G);
        CHECK(space.rank() == rank(G));

        BitVector v = refgf2::pack(refgf2::random_vec(cols, rng));
        BitVector canon = space.reduce(v);

        // Enumerate the full coset v + rowspace(G).
        std::vector<BitVector> span{BitVector(cols)};
        for (std::size_t r = 0; r < G.rows(); ++r) {
            std::size_t count = span.size();
            for (std::size_t i = 0; i < count; ++i) span.push_back(span[i] ^ G.row(r));
        }
        bool canon_in_coset = false;
        for (const BitVector& member : span) {
            BitVector coset_member = v ^ member;
            if (coset_member == canon) canon_in_coset = true;
            CHECK(!coset_member.lex_less(canon));          // canon is minimal
            CHECK(space.reduce(coset_member) == canon);    // and coset-invariant
            CHECK(space.contains(coset_member ^ v));
        }
        CHECK(canon_in_coset);
    }
}
