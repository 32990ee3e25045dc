#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

// Bit-packed linear algebra over GF(2). Vectors and matrices pack 64 bits per
// word; all trailing pad bits are kept zero so whole-word comparisons and
// popcounts are valid.

namespace bpgd {

class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t len) : len_(len), words_(word_count(len), 0) {}

    // Build from 0/1 values, e.g. BitVector::from_bits({0,0,1,0}).
    static BitVector from_bits(std::initializer_list<int> bits);
    static BitVector from_bits(const std::vector<int>& bits);
    // Build from a set of 0-indexed positions.
    static BitVector from_support(std::size_t len, std::span<const std::size_t> support);
    // Parse a contiguous 0/1 string, e.g. "0010".
    static BitVector from_string(const std::string& s);

    std::size_t size() const { return len_; }
    bool empty() const { return len_ == 0; }

    bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i, bool v) {
        std::uint64_t mask = std::uint64_t(1) << (i & 63);
        if (v) words_[i >> 6] |= mask; else words_[i >> 6] &= ~mask;
    }
    void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t(1) << (i & 63); }

    std::size_t weight() const;           // number of set bits
    bool any() const;
    bool none() const { return !any(); }

    BitVector& operator^=(const BitVector& o);  // requires equal length
    friend BitVector operator^(BitVector a, const BitVector& b) { a ^= b; return a; }
    bool operator==(const BitVector& o) const { return len_ == o.len_ && words_ == o.words_; }
    bool operator!=(const BitVector& o) const { return !(*this == o); }
    // Lexicographic order with position 0 most significant (so "01" < "10").
    bool lex_less(const BitVector& o) const;

    // Parity of the AND of two equal-length vectors.
    static bool dot(const BitVector& a, const BitVector& b);

    std::vector<std::size_t> support() const;  // 0-indexed set positions, ascending
    std::string to_string() const;             // "0101..."

    std::span<const std::uint64_t> words() const { return words_; }
    std::span<std::uint64_t> words_mut() { return words_; }
    static std::size_t word_count(std::size_t len) { return (len + 63) / 64; }
    void clear_pad();  // zero bits beyond len_ (call after raw word writes)

private:
    std::size_t len_ = 0;
    std::vector<std::uint64_t> words_;
};

class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), wpr_(BitVector::word_count(cols)), data_(rows * wpr_, 0) {}

    static BitMatrix identity(std::size_t n);
    // Build from row strings, e.g. {"110", "011"}.
    static BitMatrix from_rows(const std::vector<std::string>& rows);
    static BitMatrix from_rows(const std::vector<BitVector>& rows);
    static BitMatrix from_rows(std::initializer_list<const char*> rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    bool get(std::size_t r, std::size_t c) const {
        return (data_[r * wpr_ + (c >> 6)] >> (c & 63)) & 1u;
    }
    void set(std::size_t r, std::size_t c, bool v) {
        std::uint64_t mask = std::uint64_t(1) << (c & 63);
        std::uint64_t& w = data_[r * wpr_ + (c >> 6)];
        if (v) w |= mask; else w &= ~mask;
    }

    BitVector row(std::size_t r) const;
    void set_row(std::size_t r, const BitVector& v);
    std::span<const std::uint64_t> row_words(std::size_t r) const {
        return {data_.data() + r * wpr_, wpr_};
    }
    std::size_t row_weight(std::size_t r) const;

    void xor_row_into(std::size_t src, std::size_t dst);  // row[dst] ^= row[src]
    void swap_rows(std::size_t a, std::size_t b);

    BitMatrix transpose() const;
    // Kronecker product: (this) (x) (other).
    BitMatrix kronecker(const BitMatrix& o) const;
    // Horizontal concatenation [this | o]; requires equal row counts.
    BitMatrix hstack(const BitMatrix& o) const;
    // Vertical concatenation; requires equal column counts.
    BitMatrix vstack(const BitMatrix& o) const;

    bool operator==(const BitMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

private:
    std::size_t rows_ = 0, cols_ = 0, wpr_ = 0;
    std::vector<std::uint64_t> data_;
};

// y = M x over GF(2); throws std::invalid_argument on dimension mismatch.
BitVector mat_vec_mul(const BitMatrix& M, const BitVector& x);

std::size_t rank(const BitMatrix& M);

// True iff v is a GF(2) linear combination of the rows of M.
bool in_row_space(const BitMatrix& M, const BitVector& v);

// Basis of {x : M x = 0}, one row per basis vector (may have 0 rows).
BitMatrix nullspace_basis(const BitMatrix& M);

// Cached reduced-row-echelon form of a matrix's row space. Supports O(rank)
// membership tests and reduction to the canonical (lexicographically smallest)
// coset representative: the unique member with zeros in all pivot columns.
class RowSpace {
public:
    RowSpace() = default;
    explicit RowSpace(const BitMatrix& M);

    std::size_t rank() const { return pivots_.size(); }
    std::size_t cols() const { return rref_.cols(); }
    bool contains(const BitVector& v) const;
    BitVector reduce(BitVector v) const;
    const BitMatrix& rref() const { return rref_; }
    const std::vector<std::size_t>& pivot_cols() const { return pivots_; }

private:
    BitMatrix rref_;                  // rank rows, in echelon order
    std::vector<std::size_t> pivots_; // pivot column of each rref row
};

// Solution of M x = s: x0 a particular solution (valid iff solvable).
struct AffineSolution {
    bool solvable = false;
    BitVector particular;
};
AffineSolution solve_linear(const BitMatrix& M, const BitVector& s);

}  // namespace bpgd
