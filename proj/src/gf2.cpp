#include "bpgd/gf2.hpp"

#include <bit>
#include <stdexcept>

namespace bpgd {

namespace {
std::uint64_t pad_mask(std::size_t len) {
    std::size_t rem = len & 63;
    return rem ? ((std::uint64_t(1) << rem) - 1) : ~std::uint64_t(0);
}
}  // namespace

BitVector BitVector::from_bits(std::initializer_list<int> bits) {
    return from_bits(std::vector<int>(bits));
}

BitVector BitVector::from_bits(const std::vector<int>& bits) {
    BitVector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) v.set(i, true);
    return v;
}

BitVector BitVector::from_support(std::size_t len, std::span<const std::size_t> support) {
    BitVector v(len);
    for (std::size_t i : support) {
        if (i >= len) throw std::invalid_argument("BitVector::from_support: index out of range");
        v.set(i, true);
    }
    return v;
}

BitVector BitVector::from_string(const std::string& s) {
    BitVector v(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '1') v.set(i, true);
        else if (s[i] != '0') throw std::invalid_argument("BitVector::from_string: expected 0/1");
    }
    return v;
}

std::size_t BitVector::weight() const {
    std::size_t w = 0;
    for (std::uint64_t x : words_) w += std::popcount(x);
    return w;
}

bool BitVector::any() const {
    for (std::uint64_t x : words_)
        if (x) return true;
    return false;
}

BitVector& BitVector::operator^=(const BitVector& o) {
    if (len_ != o.len_) throw std::invalid_argument("BitVector::operator^=: length mismatch");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
    return *this;
}

bool BitVector::lex_less(const BitVector& o) const {
    if (len_ != o.len_) throw std::invalid_argument("BitVector::lex_less: length mismatch");
    for (std::size_t w = 0; w < words_.size(); ++w) {
        std::uint64_t diff = words_[w] ^ o.words_[w];
        if (diff) {
            // lowest differing bit is the most significant position
            std::uint64_t low = diff & (~diff + 1);
            return (o.words_[w] & low) != 0;  // other has 1 there -> we are smaller
        }
    }
    return false;
}

bool BitVector::dot(const BitVector& a, const BitVector& b) {
    if (a.len_ != b.len_) throw std::invalid_argument("BitVector::dot: length mismatch");
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < a.words_.size(); ++i) acc ^= a.words_[i] & b.words_[i];
    return std::popcount(acc) & 1u;
}

std::vector<std::size_t> BitVector::support() const {
    std::vector<std::size_t> out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
        std::uint64_t x = words_[w];
        while (x) {
            out.push_back(64 * w + std::countr_zero(x));
            x &= x - 1;
        }
    }
    return out;
}

std::string BitVector::to_string() const {
    std::string s(len_, '0');
    for (std::size_t i = 0; i < len_; ++i)
        if (get(i)) s[i] = '1';
    return s;
}

void BitVector::clear_pad() {
    if (!words_.empty()) words_.back() &= pad_mask(len_);
}

BitMatrix BitMatrix::identity(std::size_t n) {
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
    return m;
}

BitMatrix BitMatrix::from_rows(const std::vector<std::string>& rows) {
    if (rows.empty()) return {};
    BitMatrix m(rows.size(), rows[0].size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != m.cols())
            throw std::invalid_argument("BitMatrix::from_rows: ragged rows");
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (rows[r][c] == '1') m.set(r, c, true);
            else if (rows[r][c] != '0') throw std::invalid_argument("BitMatrix::from_rows: expected 0/1");
        }
    }
    return m;
}

BitMatrix BitMatrix::from_rows(const std::vector<BitVector>& rows) {
    if (rows.empty()) return {};
    BitMatrix m(rows.size(), rows[0].size());
    for (std::size_t r = 0; r < rows.size(); ++r) m.set_row(r, rows[r]);
    return m;
}

BitMatrix BitMatrix::from_rows(std::initializer_list<const char*> rows) {
    return from_rows(std::vector<std::string>(rows.begin(), rows.end()));
}

BitVector BitMatrix::row(std::size_t r) const {
    BitVector v(cols_);
    auto w = v.words_mut();
    for (std::size_t i = 0; i < wpr_; ++i) w[i] = data_[r * wpr_ + i];
    return v;
}

void BitMatrix::set_row(std::size_t r, const BitVector& v) {
    if (v.size() != cols_) throw std::invalid_argument("BitMatrix::set_row: length mismatch");
    auto w = v.words();
    for (std::size_t i = 0; i < wpr_; ++i) data_[r * wpr_ + i] = w[i];
}

std::size_t BitMatrix::row_weight(std::size_t r) const {
    std::size_t w = 0;
    for (std::size_t i = 0; i < wpr_; ++i) w += std::popcount(data_[r * wpr_ + i]);
    return w;
}

void BitMatrix::xor_row_into(std::size_t src, std::size_t dst) {
    for (std::size_t i = 0; i < wpr_; ++i) data_[dst * wpr_ + i] ^= data_[src * wpr_ + i];
}

void BitMatrix::swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < wpr_; ++i)
        std::swap(data_[a * wpr_ + i], data_[b * wpr_ + i]);
}

BitMatrix BitMatrix::transpose() const {
    BitMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t i = 0; i < wpr_; ++i) {
            std::uint64_t x = data_[r * wpr_ + i];
            while (x) {
                std::size_t c = 64 * i + std::countr_zero(x);
                t.set(c, r, true);
                x &= x - 1;
            }
        }
    return t;
}

BitMatrix BitMatrix::kronecker(const BitMatrix& o) const {
    BitMatrix k(rows_ * o.rows_, cols_ * o.cols_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) {
            if (!get(r, c)) continue;
            for (std::size_t r2 = 0; r2 < o.rows_; ++r2)
                for (std::size_t c2 = 0; c2 < o.cols_; ++c2)
                    if (o.get(r2, c2)) k.set(r * o.rows_ + r2, c * o.cols_ + c2, true);
        }
    return k;
}

BitMatrix BitMatrix::hstack(const BitMatrix& o) const {
    if (rows_ != o.rows_) throw std::invalid_argument("BitMatrix::hstack: row count mismatch");
    BitMatrix m(rows_, cols_ + o.cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c)
            if (get(r, c)) m.set(r, c, true);
        for (std::size_t c = 0; c < o.cols_; ++c)
            if (o.get(r, c)) m.set(r, cols_ + c, true);
    }
    return m;
}

BitMatrix BitMatrix::vstack(const BitMatrix& o) const {
    if (cols_ != o.cols_) throw std::invalid_argument("BitMatrix::vstack: column count mismatch");
    BitMatrix m(rows_ + o.rows_, cols_);
    for (std::size_t r = 0; r < rows_; ++r) m.set_row(r, row(r));
    for (std::size_t r = 0; r < o.rows_; ++r) m.set_row(rows_ + r, o.row(r));
    return m;
}

BitVector mat_vec_mul(const BitMatrix& M, const BitVector& x) {
    if (M.cols() != x.size()) throw std::invalid_argument("mat_vec_mul: dimension mismatch");
    BitVector y(M.rows());
    auto xw = x.words();
    for (std::size_t r = 0; r < M.rows(); ++r) {
        auto rw = M.row_words(r);
        std::uint64_t acc = 0;
        for (std::size_t i = 0; i < rw.size(); ++i) acc ^= rw[i] & xw[i];
        if (std::popcount(acc) & 1u) y.set(r, true);
    }
    return y;
}

namespace {

// Gaussian elimination to reduced row echelon form, in place.
// Returns the pivot column of each of the first `rank` rows.
std::vector<std::size_t> rref_inplace(BitMatrix& M) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < M.cols() && r < M.rows(); ++c) {
        std::size_t sel = r;
        while (sel < M.rows() && !M.get(sel, c)) ++sel;
        if (sel == M.rows()) continue;
        M.swap_rows(sel, r);
        for (std::size_t i = 0; i < M.rows(); ++i)
            if (i != r && M.get(i, c)) M.xor_row_into(r, i);
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

}  // namespace

std::size_t rank(const BitMatrix& M) {
    BitMatrix copy = M;
    return rref_inplace(copy).size();
}

bool in_row_space(const BitMatrix& M, const BitVector& v) {
    if (M.cols() != v.size()) throw std::invalid_argument("in_row_space: dimension mismatch");
    return RowSpace(M).contains(v);
}

BitMatrix nullspace_basis(const BitMatrix& M) {
    BitMatrix R = M;
    std::vector<std::size_t> pivots = rref_inplace(R);
    std::vector<bool> is_pivot(M.cols(), false);
    for (std::size_t c : pivots) is_pivot[c] = true;

    std::size_t dim = M.cols() - pivots.size();
    BitMatrix basis(dim, M.cols());
    std::size_t b = 0;
    for (std::size_t free_c = 0; free_c < M.cols(); ++free_c) {
        if (is_pivot[free_c]) continue;
        // basis vector: free column set to 1, pivot columns chosen to cancel
        basis.set(b, free_c, true);
        for (std::size_t i = 0; i < pivots.size(); ++i)
            if (R.get(i, free_c)) basis.set(b, pivots[i], true);
        ++b;
    }
    return basis;
}

RowSpace::RowSpace(const BitMatrix& M) {
    BitMatrix R = M;
    pivots_ = rref_inplace(R);
    rref_ = BitMatrix(pivots_.size(), M.cols());
    for (std::size_t i = 0; i < pivots_.size(); ++i) rref_.set_row(i, R.row(i));
}

bool RowSpace::contains(const BitVector& v) const {
    return reduce(v).none();
}

BitVector RowSpace::reduce(BitVector v) const {
    if (v.size() != rref_.cols() && rank() > 0)
        throw std::invalid_argument("RowSpace::reduce: dimension mismatch");
    for (std::size_t i = 0; i < pivots_.size(); ++i)
        if (v.get(pivots_[i])) v ^= rref_.row(i);
    return v;
}

AffineSolution solve_linear(const BitMatrix& M, const BitVector& s) {
    if (M.rows() != s.size()) throw std::invalid_argument("solve_linear: dimension mismatch");
    // eliminate on [M | s]
    BitMatrix aug(M.rows(), M.cols() + 1);
    for (std::size_t r = 0; r < M.rows(); ++r) {
        for (std::size_t c = 0; c < M.cols(); ++c)
            if (M.get(r, c)) aug.set(r, c, true);
        if (s.get(r)) aug.set(r, M.cols(), true);
    }
    std::size_t r = 0;
    std::vector<std::size_t> pivots;
    for (std::size_t c = 0; c < M.cols() && r < M.rows(); ++c) {
        std::size_t sel = r;
        while (sel < M.rows() && !aug.get(sel, c)) ++sel;
        if (sel == M.rows()) continue;
        aug.swap_rows(sel, r);
        for (std::size_t i = 0; i < M.rows(); ++i)
            if (i != r && aug.get(i, c)) aug.xor_row_into(r, i);
        pivots.push_back(c);
        ++r;
    }
    AffineSolution sol;
    for (std::size_t i = r; i < M.rows(); ++i)
        if (aug.get(i, M.cols())) return sol;  // 0 = 1 row: inconsistent
    sol.solvable = true;
    sol.particular = BitVector(M.cols());
    for (std::size_t i = 0; i < pivots.size(); ++i)
        if (aug.get(i, M.cols())) sol.particular.set(pivots[i], true);
    return sol;
}

}  // namespace bpgd
