#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "bpgd/gf2.hpp"

// CSS stabilizer codes given by a pair (H1, G2) with G2 * H1^T = 0 over GF(2).
// Rows of H1 generate the Z-type stabilizers (they detect the X component of
// an error); rows of G2 generate the X-type stabilizers (they detect the Z
// component). Syndromes are ordered H1 rows first, then G2 rows.

namespace bpgd {

// Binary symplectic representation of an n-qubit Pauli operator (phases ignored):
// x bit i set = X acts on qubit i, z bit i set = Z acts; both = Y.
struct PauliVector {
    BitVector x;
    BitVector z;

    PauliVector() = default;
    explicit PauliVector(std::size_t n) : x(n), z(n) {}
    PauliVector(BitVector x_, BitVector z_);

    std::size_t size() const { return x.size(); }
    bool operator==(const PauliVector& o) const { return x == o.x && z == o.z; }
};

// Symplectic inner product <(a,b),(a',b')> = b'.a + a'.b mod 2.
// 0 = the two Paulis commute, 1 = they anticommute.
bool symplectic_inner(const PauliVector& p, const PauliVector& q);

enum class DecodeOutcome : std::uint8_t {
    FailureNonConvergence = 0,
    SuccessExactMatch = 1,
    SuccessDegenerate = 2,
    FailureLogical = 3,
};
const char* to_string(DecodeOutcome o);

class CssCode {
public:
    // Validates G2 * H1^T = 0; throws std::invalid_argument naming the first
    // offending (G2 row, H1 row) pair otherwise. G2 may have zero rows.
    CssCode(std::string name, BitMatrix H1, BitMatrix G2);

    const std::string& name() const { return name_; }
    std::size_t n() const { return H1_.cols(); }
    std::size_t k1() const { return k1_; }    // n - rank(H1)
    std::size_t k2() const { return k2_; }    // rank(G2)
    std::size_t k() const { return k1_ - k2_; }
    std::size_t m() const { return n() - k1_ + k2_; }  // independent stabilizer count

    const BitMatrix& H1() const { return H1_; }
    const BitMatrix& G2() const { return G2_; }
    const RowSpace& G2_space() const { return g2_space_; }
    const RowSpace& H1_space() const { return h1_space_; }

private:
    std::string name_;
    BitMatrix H1_, G2_;
    std::size_t k1_ = 0, k2_ = 0;
    RowSpace g2_space_, h1_space_;
};

// s_x = H1 x (detects the X component).
BitVector syndrome_x(const CssCode& code, const BitVector& x);

// Full syndrome (s_x, s_z) = (H1 e.x, G2 e.z), concatenated in that order.
BitVector syndrome_full(const CssCode& code, const PauliVector& e);

// Classify a bit-flip decode against the true error. `estimate` empty means
// the decoder did not converge. If an estimate is given its syndrome must
// equal the truth's (otherwise throws: contract violation upstream).
DecodeOutcome classify_x_outcome(const CssCode& code, const BitVector& truth,
                                 const std::optional<BitVector>& estimate);

// Quaternary analogue: residual (truth + estimate) must be a stabilizer, i.e.
// residual.x in rowspace(G2) and residual.z in rowspace(H1).
DecodeOutcome classify_quaternary_outcome(const CssCode& code, const PauliVector& truth,
                                          const std::optional<PauliVector>& estimate);

// Hypergraph product of two binary matrices Ha (ma x na) and Hb (mb x nb):
//   H1 = [Ha (x) I_nb | I_ma (x) Hb^T]
//   G2 = [I_na (x) Hb | Ha^T (x) I_mb]
// yielding a CSS code on n = na*nb + ma*mb qubits.
CssCode hypergraph_product(const BitMatrix& Ha, const BitMatrix& Hb, const std::string& name);

// Text format for CSS codes:
//   css <name> <n> <rows_H1> <rows_G2>
// followed by one line per H1 row then one per G2 row, each listing the row's
// support as 1-indexed column indices sorted ascending. '#' starts a comment;
// blank lines are ignored. Parse errors name the offending line.
CssCode parse_code_file(std::istream& in, const std::string& source_name = "<stream>");
CssCode load_code_file(const std::string& path);
// Canonical serialization of the same format (used for byte-comparisons).
std::string serialize_code(const CssCode& code);
void save_code_file(const CssCode& code, const std::string& path);

// Reader for the standard alist sparse-matrix format: "n m", max degrees,
// per-column and per-row degree lists, then per-column and per-row index
// lists (1-indexed, 0 = padding). Returns the m x n parity-check matrix.
BitMatrix parse_alist(std::istream& in, const std::string& source_name = "<stream>");
BitMatrix load_alist(const std::string& path);

}  // namespace bpgd
