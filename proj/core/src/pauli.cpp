#include "qml/pauli.hpp"

#include <bit>
#include <stdexcept>

namespace qml {

namespace {

// Phase exponent of sigma_i sigma_j (power of i). With codes X=1, Y=2, Z=3
// the product word is i^j, and the phase is +i for cyclic (X,Y), (Y,Z),
// (Z,X) pairs, -i for the reversed pairs, +1 otherwise.
constexpr int kPhaseExp[4][4] = {
    {0, 0, 0, 0},
    {0, 0, 1, 3},
    {0, 3, 0, 1},
    {0, 1, 3, 0},
};

constexpr int code_of_letter(char c) {
    switch (c) {
        case 'I': return 0;
        case 'X': return 1;
        case 'Y': return 2;
        case 'Z': return 3;
        default: return -1;
    }
}

constexpr char kLetters[4] = {'I', 'X', 'Y', 'Z'};

}  // namespace

std::string phase_text(Phase p) {
    switch (p) {
        case Phase::PlusOne: return "+1";
        case Phase::PlusI: return "+i";
        case Phase::MinusOne: return "-1";
        case Phase::MinusI: return "-i";
    }
    return "?";
}

PauliString::PauliString(uint32_t n, uint64_t packed_code) : n_(n), code_(packed_code) {
    if (n < 1 || n > 32) throw std::invalid_argument("PauliString: qubit count must be in [1, 32]");
    if (n < 32 && packed_code >> (2 * n)) {
        throw std::invalid_argument("PauliString: packed code exceeds qubit count");
    }
}

PauliString PauliString::identity(uint32_t n) { return PauliString(n, 0); }

PauliString PauliString::single(uint32_t n, uint32_t qubit, int code) {
    return identity(n).with(qubit, code);
}

PauliString PauliString::from_text(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("PauliString: empty text");
    uint64_t code = 0;
    for (char c : text) {
        int v = code_of_letter(c);
        if (v < 0) throw std::invalid_argument("PauliString: bad letter in text form");
        code = (code << 2) | static_cast<uint64_t>(v);
    }
    return PauliString(static_cast<uint32_t>(text.size()), code);
}

int PauliString::code(uint32_t qubit) const {
    if (qubit >= n_) throw std::out_of_range("PauliString: qubit index out of range");
    return static_cast<int>((code_ >> (2 * (n_ - 1 - qubit))) & 3);
}

PauliString PauliString::with(uint32_t qubit, int code) const {
    if (qubit >= n_) throw std::out_of_range("PauliString: qubit index out of range");
    if (code < 0 || code > 3) throw std::invalid_argument("PauliString: code must be in [0, 3]");
    uint32_t shift = 2 * (n_ - 1 - qubit);
    uint64_t cleared = code_ & ~(3ULL << shift);
    return PauliString(n_, cleared | (static_cast<uint64_t>(code) << shift));
}

uint32_t PauliString::weight() const {
    // Count qubit pairs with at least one set bit.
    uint64_t pairs = (code_ | (code_ >> 1)) & 0x5555555555555555ULL;
    return static_cast<uint32_t>(std::popcount(pairs));
}

std::string PauliString::text() const {
    std::string s(n_, 'I');
    for (uint32_t q = 0; q < n_; ++q) s[q] = kLetters[code(q)];
    return s;
}

PhasedPauli pauli_product(const PauliString& p, const PauliString& q) {
    if (p.size() != q.size()) throw std::invalid_argument("pauli_product: length mismatch");
    const uint32_t n = p.size();
    // With this encoding the product word is the bitwise XOR of the codes.
    PauliString word(n, p.index() ^ q.index());
    int exp = 0;
    for (uint32_t k = 0; k < n; ++k) exp += kPhaseExp[p.code(k)][q.code(k)];
    return {static_cast<Phase>(exp & 3), word};
}

StructureTensor structure_tensor() {
    StructureTensor b{};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            int k = i ^ j;
            b[i][j][k] = phase_value(static_cast<Phase>(kPhaseExp[i][j]));
        }
    }
    return b;
}

std::optional<LocalZCommutator> commutator_with_local_z(uint32_t k, const PauliString& p) {
    if (k >= p.size()) throw std::out_of_range("commutator_with_local_z: qubit index out of range");
    int c = p.code(k);
    if (c == 0 || c == 3) return std::nullopt;  // I or Z: commutes
    PauliString zk = PauliString::single(p.size(), k, 3);
    return LocalZCommutator{2, pauli_product(zk, p)};
}

}  // namespace qml
