#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace qml {

// Exact fourth root of unity, stored as the exponent k in i^k.
enum class Phase : uint8_t { PlusOne = 0, PlusI = 1, MinusOne = 2, MinusI = 3 };

constexpr Phase phase_mul(Phase a, Phase b) {
    return static_cast<Phase>((static_cast<int>(a) + static_cast<int>(b)) & 3);
}

constexpr std::complex<double> phase_value(Phase p) {
    switch (p) {
        case Phase::PlusOne: return {1.0, 0.0};
        case Phase::PlusI: return {0.0, 1.0};
        case Phase::MinusOne: return {-1.0, 0.0};
        case Phase::MinusI: return {0.0, -1.0};
    }
    return {1.0, 0.0};
}

std::string phase_text(Phase p);

// N-qubit Pauli word, 2 bits per qubit (0=I, 1=X, 2=Y, 3=Z), packed with
// qubit 0 in the most significant pair so that the packed value equals the
// base-4 index with qubit 0 as the leading digit. N <= 32.
class PauliString {
  public:
    PauliString() : n_(1), code_(0) {}  // single-qubit identity
    PauliString(uint32_t n, uint64_t packed_code);
    static PauliString identity(uint32_t n);
    // Places `code` on `qubit`, identity elsewhere.
    static PauliString single(uint32_t n, uint32_t qubit, int code);
    // Parses "IXYZ" with qubit 0 leftmost.
    static PauliString from_text(std::string_view text);

    uint32_t size() const { return n_; }
    int code(uint32_t qubit) const;
    PauliString with(uint32_t qubit, int code) const;
    uint32_t weight() const;
    bool is_identity() const { return code_ == 0; }
    // Base-4 integer with qubit 0 as the most significant digit; doubles as
    // the row index into coefficient matrices.
    uint64_t index() const { return code_; }
    std::string text() const;

    bool operator==(const PauliString& o) const = default;

  private:
    uint32_t n_;
    uint64_t code_;
};

struct PhasedPauli {
    Phase phase;
    PauliString word;
};

// sigma_p * sigma_q = phase * sigma_word, exact.
PhasedPauli pauli_product(const PauliString& p, const PauliString& q);

// B[i][j][k] with sigma_i sigma_j = sum_k B[i][j][k] sigma_k. Entries are
// exactly 0, 1, or +/-i.
using StructureTensor = std::array<std::array<std::array<std::complex<double>, 4>, 4>, 4>;
StructureTensor structure_tensor();

// [Z_k, sigma_p]. Empty when they commute; otherwise the factor 2 is carried
// as an exact integer next to the phased word, [Z_k, sigma_p] = 2 Z_k sigma_p.
struct LocalZCommutator {
    int coefficient;  // always 2
    PhasedPauli term;
};
std::optional<LocalZCommutator> commutator_with_local_z(uint32_t k, const PauliString& p);

}  // namespace qml
