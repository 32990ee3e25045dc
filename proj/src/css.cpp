#include "bpgd/css.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bpgd {

PauliVector::PauliVector(BitVector x_, BitVector z_) : x(std::move(x_)), z(std::move(z_)) {
    if (x.size() != z.size())
        throw std::invalid_argument("PauliVector: x and z length mismatch");
}

bool symplectic_inner(const PauliVector& p, const PauliVector& q) {
    if (p.size() != q.size())
        throw std::invalid_argument("symplectic_inner: length mismatch");
    return BitVector::dot(q.z, p.x) ^ BitVector::dot(q.x, p.z);
}

const char* to_string(DecodeOutcome o) {
    switch (o) {
        case DecodeOutcome::FailureNonConvergence: return "nonconvergence";
        case DecodeOutcome::SuccessExactMatch: return "exact-match";
        case DecodeOutcome::SuccessDegenerate: return "degenerate";
        case DecodeOutcome::FailureLogical: return "logical";
    }
    return "?";
}

CssCode::CssCode(std::string name, BitMatrix H1, BitMatrix G2)
    : name_(std::move(name)), H1_(std::move(H1)), G2_(std::move(G2)) {
    if (G2_.rows() > 0 && G2_.cols() != H1_.cols())
        throw std::invalid_argument("CssCode: H1 and G2 column counts differ");
    if (G2_.rows() == 0 && G2_.cols() != H1_.cols())
        G2_ = BitMatrix(0, H1_.cols());
    for (std::size_t g = 0; g < G2_.rows(); ++g) {
        for (std::size_t h = 0; h < H1_.rows(); ++h) {
            if (BitVector::dot(G2_.row(g), H1_.row(h))) {
                std::ostringstream msg;
                msg << "CssCode '" << name_ << "': commutation violated, G2 row " << g
                    << " anticommutes with H1 row " << h;
                throw std::invalid_argument(msg.str());
            }
        }
    }
    k1_ = H1_.cols() - rank(H1_);
    k2_ = rank(G2_);
    g2_space_ = RowSpace(G2_);
    h1_space_ = RowSpace(H1_);
}

BitVector syndrome_x(const CssCode& code, const BitVector& x) {
    return mat_vec_mul(code.H1(), x);
}

BitVector syndrome_full(const CssCode& code, const PauliVector& e) {
    BitVector sx = mat_vec_mul(code.H1(), e.x);
    BitVector sz = mat_vec_mul(code.G2(), e.z);
    BitVector s(sx.size() + sz.size());
    for (std::size_t i = 0; i < sx.size(); ++i) s.set(i, sx.get(i));
    for (std::size_t i = 0; i < sz.size(); ++i) s.set(sx.size() + i, sz.get(i));
    return s;
}

DecodeOutcome classify_x_outcome(const CssCode& code, const BitVector& truth,
                                 const std::optional<BitVector>& estimate) {
    if (!estimate) return DecodeOutcome::FailureNonConvergence;
    if (syndrome_x(code, *estimate) != syndrome_x(code, truth))
        throw std::invalid_argument(
            "classify_x_outcome: estimate syndrome differs from truth syndrome "
            "(decoder contract violation)");
    BitVector residual = truth ^ *estimate;
    if (residual.none()) return DecodeOutcome::SuccessExactMatch;
    if (code.G2_space().contains(residual)) return DecodeOutcome::SuccessDegenerate;
    return DecodeOutcome::FailureLogical;
}

DecodeOutcome classify_quaternary_outcome(const CssCode& code, const PauliVector& truth,
                                          const std::optional<PauliVector>& estimate) {
    if (!estimate) return DecodeOutcome::FailureNonConvergence;
    if (syndrome_full(code, *estimate) != syndrome_full(code, truth))
        throw std::invalid_argument(
            "classify_quaternary_outcome: estimate syndrome differs from truth syndrome "
            "(decoder contract violation)");
    BitVector rx = truth.x ^ estimate->x;
    BitVector rz = truth.z ^ estimate->z;
    if (rx.none() && rz.none()) return DecodeOutcome::SuccessExactMatch;
    if (code.G2_space().contains(rx) && code.H1_space().contains(rz))
        return DecodeOutcome::SuccessDegenerate;
    return DecodeOutcome::FailureLogical;
}

CssCode hypergraph_product(const BitMatrix& Ha, const BitMatrix& Hb, const std::string& name) {
    std::size_t ma = Ha.rows(), na = Ha.cols();
    std::size_t mb = Hb.rows(), nb = Hb.cols();
    if (ma == 0 || na == 0 || mb == 0 || nb == 0)
        throw std::invalid_argument("hypergraph_product: empty factor matrix");
    BitMatrix H1 = Ha.kronecker(BitMatrix::identity(nb))
                       .hstack(BitMatrix::identity(ma).kronecker(Hb.transpose()));
    BitMatrix G2 = BitMatrix::identity(na).kronecker(Hb)
                       .hstack(Ha.transpose().kronecker(BitMatrix::identity(mb)));
    return CssCode(name, std::move(H1), std::move(G2));
}

namespace {

struct LineReader {
    std::istream& in;
    const std::string& source;
    std::size_t lineno = 0;

    // next significant line (comments stripped, blanks skipped); false at EOF
    bool next(std::string& out) {
        std::string line;
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            bool blank = line.find_first_not_of(" \t\r\n") == std::string::npos;
            if (blank) continue;
            out = line;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) const {
        std::ostringstream msg;
        msg << source << ":" << lineno << ": " << what;
        throw std::runtime_error(msg.str());
    }
};

void parse_support_row(LineReader& rd, const std::string& line, BitMatrix& M, std::size_t r) {
    std::istringstream ss(line);
    long prev = 0;
    long idx;
    while (ss >> idx) {
        if (idx < 1 || idx > static_cast<long>(M.cols()))
            rd.fail("column index " + std::to_string(idx) + " out of range [1, " +
                    std::to_string(M.cols()) + "]");
        if (idx <= prev) rd.fail("support indices must be strictly ascending");
        M.set(r, static_cast<std::size_t>(idx - 1), true);
        prev = idx;
    }
    if (!ss.eof()) rd.fail("expected integer column index");
}

}  // namespace

CssCode parse_code_file(std::istream& in, const std::string& source_name) {
    LineReader rd{in, source_name};
    std::string line;
    if (!rd.next(line)) rd.fail("empty file, expected 'css' header");
    std::istringstream hdr(line);
    std::string tag, name;
    long n = 0, r1 = -1, r2 = -1;
    hdr >> tag >> name >> n >> r1 >> r2;
    if (hdr.fail() || tag != "css")
        rd.fail("expected header 'css <name> <n> <rows_H1> <rows_G2>'");
    if (n <= 0 || r1 < 0 || r2 < 0) rd.fail("header counts must be non-negative (n positive)");

    BitMatrix H1(static_cast<std::size_t>(r1), static_cast<std::size_t>(n));
    BitMatrix G2(static_cast<std::size_t>(r2), static_cast<std::size_t>(n));
    for (long r = 0; r < r1; ++r) {
        if (!rd.next(line)) rd.fail("unexpected end of file: expected H1 row " + std::to_string(r + 1));
        parse_support_row(rd, line, H1, static_cast<std::size_t>(r));
    }
    for (long r = 0; r < r2; ++r) {
        if (!rd.next(line)) rd.fail("unexpected end of file: expected G2 row " + std::to_string(r + 1));
        parse_support_row(rd, line, G2, static_cast<std::size_t>(r));
    }
    if (rd.next(line)) rd.fail("trailing content after declared rows");
    return CssCode(name, std::move(H1), std::move(G2));
}

CssCode load_code_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open code file: " + path);
    return parse_code_file(in, path);
}

std::string serialize_code(const CssCode& code) {
    std::ostringstream out;
    out << "css " << code.name() << " " << code.n() << " " << code.H1().rows() << " "
        << code.G2().rows() << "\n";
    auto emit = [&](const BitMatrix& M) {
        for (std::size_t r = 0; r < M.rows(); ++r) {
            auto sup = M.row(r).support();
            if (sup.empty())
                throw std::runtime_error("serialize_code: zero row has no support representation");
            for (std::size_t i = 0; i < sup.size(); ++i)
                out << (i ? " " : "") << (sup[i] + 1);
            out << "\n";
        }
    };
    emit(code.H1());
    emit(code.G2());
    return out.str();
}

void save_code_file(const CssCode& code, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write code file: " + path);
    out << serialize_code(code);
}

namespace {

std::vector<long> read_ints(LineReader& rd, std::size_t count_expected_at_least = 0) {
    std::string line;
    if (!rd.next(line)) rd.fail("unexpected end of alist file");
    std::vector<long> vals;
    std::istringstream ss(line);
    long v;
    while (ss >> v) vals.push_back(v);
    if (!ss.eof()) rd.fail("expected integers");
    if (vals.size() < count_expected_at_least) rd.fail("too few integers on line");
    return vals;
}

}  // namespace

BitMatrix parse_alist(std::istream& in, const std::string& source_name) {
    LineReader rd{in, source_name};
    auto dims = read_ints(rd, 2);
    long n = dims[0], m = dims[1];
    if (n <= 0 || m <= 0) rd.fail("alist dimensions must be positive");
    read_ints(rd, 2);  // max column / row degrees (informational)

    auto col_deg = read_ints(rd, static_cast<std::size_t>(n));
    auto row_deg = read_ints(rd, static_cast<std::size_t>(m));
    if (col_deg.size() != static_cast<std::size_t>(n)) rd.fail("expected one degree per column");
    if (row_deg.size() != static_cast<std::size_t>(m)) rd.fail("expected one degree per row");

    BitMatrix M(static_cast<std::size_t>(m), static_cast<std::size_t>(n));
    for (long c = 0; c < n; ++c) {
        auto rows = read_ints(rd);
        long seen = 0;
        for (long r : rows) {
            if (r == 0) continue;  // padding
            if (r < 1 || r > m) rd.fail("row index out of range in column list");
            M.set(static_cast<std::size_t>(r - 1), static_cast<std::size_t>(c), true);
            ++seen;
        }
        if (seen != col_deg[static_cast<std::size_t>(c)])
            rd.fail("column degree mismatch in column " + std::to_string(c + 1));
    }
    // row lists: validate against the matrix built from the column lists
    BitMatrix check(static_cast<std::size_t>(m), static_cast<std::size_t>(n));
    for (long r = 0; r < m; ++r) {
        auto cols = read_ints(rd);
        long seen = 0;
        for (long c : cols) {
            if (c == 0) continue;
            if (c < 1 || c > n) rd.fail("column index out of range in row list");
            check.set(static_cast<std::size_t>(r), static_cast<std::size_t>(c - 1), true);
            ++seen;
        }
        if (seen != row_deg[static_cast<std::size_t>(r)])
            rd.fail("row degree mismatch in row " + std::to_string(r + 1));
    }
    if (!(M == check)) rd.fail("alist column lists and row lists describe different matrices");
    return M;
}

BitMatrix load_alist(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open alist file: " + path);
    return parse_alist(in, path);
}

}  // namespace bpgd
