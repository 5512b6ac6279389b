#include "qml/state.hpp"

#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "qml/observable.hpp"

namespace qml {

StateVector::StateVector(uint32_t n) : n_(n), amp_(std::size_t{1} << n, {0.0, 0.0}) {
    if (n < 1 || n > 20) throw std::invalid_argument("StateVector: qubit count must be in [1, 20]");
}

StateVector StateVector::zero_state(uint32_t n) {
    StateVector s(n);
    s.amp_[0] = 1.0;
    return s;
}

StateVector StateVector::from_amplitudes(uint32_t n, std::vector<std::complex<double>> amps) {
    StateVector s(n);
    if (amps.size() != s.amp_.size()) throw std::invalid_argument("StateVector: amplitude count mismatch");
    s.amp_ = std::move(amps);
    return s;
}

double StateVector::norm() const {
    double s = 0.0;
    for (const auto& a : amp_) s += std::norm(a);
    return std::sqrt(s);
}

void StateVector::normalize() {
    double nrm = norm();
    if (nrm == 0.0) throw std::runtime_error("StateVector: cannot normalize zero vector");
    for (auto& a : amp_) a /= nrm;
}

namespace {

// Bit of `qubit` inside basis index `b` (qubit 0 = MSB).
inline uint64_t qubit_bit(uint32_t n, uint32_t qubit) { return uint64_t{1} << (n - 1 - qubit); }

struct PauliMasks {
    uint64_t flip = 0;    // X and Y qubits
    uint64_t sign = 0;    // Y and Z qubits
    int y_count = 0;
};

PauliMasks masks_of(const PauliString& p) {
    PauliMasks m;
    for (uint32_t q = 0; q < p.size(); ++q) {
        switch (p.code(q)) {
            case 1: m.flip |= qubit_bit(p.size(), q); break;
            case 2:
                m.flip |= qubit_bit(p.size(), q);
                m.sign |= qubit_bit(p.size(), q);
                ++m.y_count;
                break;
            case 3: m.sign |= qubit_bit(p.size(), q); break;
            default: break;
        }
    }
    return m;
}

// Phase sigma_p applies to |b>: i^{#Y} * (-1)^{popcount(b & sign_mask)}.
inline std::complex<double> pauli_phase(const PauliMasks& m, uint64_t b) {
    static const std::complex<double> kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    std::complex<double> ph = kIPow[m.y_count & 3];
    if (std::popcount(b & m.sign) & 1) ph = -ph;
    return ph;
}

}  // namespace

void apply_pauli(StateVector& s, const PauliString& p) {
    if (p.size() != s.n_qubits()) throw std::invalid_argument("apply_pauli: dimension mismatch");
    PauliMasks m = masks_of(p);
    const uint64_t dim = s.size();
    if (m.flip == 0) {
        for (uint64_t b = 0; b < dim; ++b) s.amp(b) *= pauli_phase(m, b);
        return;
    }
    // sigma_p |b> = phase(b) |b ^ flip>; process each pair once.
    for (uint64_t b = 0; b < dim; ++b) {
        uint64_t b2 = b ^ m.flip;
        if (b2 < b) continue;
        std::complex<double> ab = s.amp(b);
        std::complex<double> ab2 = s.amp(b2);
        s.amp(b2) = pauli_phase(m, b) * ab;
        s.amp(b) = pauli_phase(m, b2) * ab2;
    }
}

std::pair<uint64_t, std::complex<double>> pauli_basis_action(const PauliString& p, uint64_t basis_index) {
    PauliMasks m = masks_of(p);
    // Result index is b ^ flip; its amplitude picks up the phase evaluated at
    // the source index.
    return {basis_index ^ m.flip, pauli_phase(m, basis_index)};
}

void apply_pauli_rotation(StateVector& s, const PauliString& p, double angle) {
    if (p.size() != s.n_qubits()) throw std::invalid_argument("apply_pauli_rotation: dimension mismatch");
    const double c = std::cos(angle / 2.0);
    const std::complex<double> mis{0.0, -std::sin(angle / 2.0)};
    PauliMasks m = masks_of(p);
    const uint64_t dim = s.size();
    if (m.flip == 0) {
        for (uint64_t b = 0; b < dim; ++b) s.amp(b) *= c + mis * pauli_phase(m, b);
        return;
    }
    for (uint64_t b = 0; b < dim; ++b) {
        uint64_t b2 = b ^ m.flip;
        if (b2 < b) continue;
        std::complex<double> ab = s.amp(b);
        std::complex<double> ab2 = s.amp(b2);
        s.amp(b) = c * ab + mis * pauli_phase(m, b2) * ab2;
        s.amp(b2) = c * ab2 + mis * pauli_phase(m, b) * ab;
    }
}

namespace {

void apply_single_qubit(StateVector& s, uint32_t qubit, std::complex<double> u00, std::complex<double> u01,
                        std::complex<double> u10, std::complex<double> u11) {
    if (qubit >= s.n_qubits()) throw std::out_of_range("gate: qubit index out of range");
    const uint64_t bit = qubit_bit(s.n_qubits(), qubit);
    const uint64_t dim = s.size();
    for (uint64_t b = 0; b < dim; ++b) {
        if (b & bit) continue;
        uint64_t b1 = b | bit;
        std::complex<double> a0 = s.amp(b);
        std::complex<double> a1 = s.amp(b1);
        s.amp(b) = u00 * a0 + u01 * a1;
        s.amp(b1) = u10 * a0 + u11 * a1;
    }
}

}  // namespace

void apply_rx(StateVector& s, uint32_t qubit, double phi) {
    double c = std::cos(phi / 2.0), sn = std::sin(phi / 2.0);
    apply_single_qubit(s, qubit, {c, 0}, {0, -sn}, {0, -sn}, {c, 0});
}

void apply_ry(StateVector& s, uint32_t qubit, double phi) {
    double c = std::cos(phi / 2.0), sn = std::sin(phi / 2.0);
    apply_single_qubit(s, qubit, {c, 0}, {-sn, 0}, {sn, 0}, {c, 0});
}

void apply_cz(StateVector& s, uint32_t control, uint32_t target) {
    if (control >= s.n_qubits() || target >= s.n_qubits()) {
        throw std::out_of_range("apply_cz: qubit index out of range");
    }
    if (control == target) throw std::invalid_argument("apply_cz: control equals target");
    const uint64_t mask = qubit_bit(s.n_qubits(), control) | qubit_bit(s.n_qubits(), target);
    const uint64_t dim = s.size();
    for (uint64_t b = 0; b < dim; ++b) {
        if ((b & mask) == mask) s.amp(b) = -s.amp(b);
    }
}

void apply_fixed_gate(StateVector& s, const FixedGate& g) {
    switch (g.kind) {
        case FixedGate::Kind::RX: apply_rx(s, g.q1, g.angle); break;
        case FixedGate::Kind::RY: apply_ry(s, g.q1, g.angle); break;
        case FixedGate::Kind::CZ: apply_cz(s, g.q1, g.q2); break;
    }
}

FixedGate inverse(const FixedGate& g) {
    FixedGate inv = g;
    if (g.kind != FixedGate::Kind::CZ) inv.angle = -g.angle;
    return inv;
}

double expectation(const StateVector& s, const LocalZObservable& obs) {
    if (obs.n_qubits() != s.n_qubits()) throw std::invalid_argument("expectation: dimension mismatch");
    const uint32_t n = s.n_qubits();
    const uint64_t dim = s.size();
    double total = 0.0;
    for (uint64_t b = 0; b < dim; ++b) {
        double p = std::norm(s.amp(b));
        if (p == 0.0) continue;
        double zsum = 0.0;
        for (uint32_t k = 0; k < n; ++k) {
            zsum += (b & qubit_bit(n, k)) ? -obs.coeff(k) : obs.coeff(k);
        }
        total += p * zsum;
    }
    return total;
}

void apply_observable(const LocalZObservable& obs, StateVector& s) {
    if (obs.n_qubits() != s.n_qubits()) throw std::invalid_argument("apply_observable: dimension mismatch");
    const uint32_t n = s.n_qubits();
    const uint64_t dim = s.size();
    for (uint64_t b = 0; b < dim; ++b) {
        double zsum = 0.0;
        for (uint32_t k = 0; k < n; ++k) {
            zsum += (b & qubit_bit(n, k)) ? -obs.coeff(k) : obs.coeff(k);
        }
        s.amp(b) *= zsum;
    }
}

std::complex<double> pauli_sandwich(const StateVector& bra, const PauliString& p, const StateVector& ket) {
    if (p.size() != bra.n_qubits() || bra.n_qubits() != ket.n_qubits()) {
        throw std::invalid_argument("pauli_sandwich: dimension mismatch");
    }
    PauliMasks m = masks_of(p);
    const uint64_t dim = ket.size();
    std::complex<double> acc = 0.0;
    for (uint64_t b = 0; b < dim; ++b) {
        acc += std::conj(bra.amp(b ^ m.flip)) * (pauli_phase(m, b) * ket.amp(b));
    }
    return acc;
}

double fidelity(const StateVector& a, const StateVector& b) {
    if (a.n_qubits() != b.n_qubits()) throw std::invalid_argument("fidelity: dimension mismatch");
    std::complex<double> ov = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) ov += std::conj(a.amp(i)) * b.amp(i);
    return std::norm(ov);
}

double pauli_coefficient(const StateVector& s, const PauliString& p) {
    if (p.size() != s.n_qubits()) throw std::invalid_argument("pauli_coefficient: dimension mismatch");
    PauliMasks m = masks_of(p);
    const uint64_t dim = s.size();
    std::complex<double> acc = 0.0;
    for (uint64_t b = 0; b < dim; ++b) {
        // <s| sigma_p |s> = sum_b conj(amp[b ^ flip]) phase(b) amp[b]
        acc += std::conj(s.amp(b ^ m.flip)) * (pauli_phase(m, b) * s.amp(b));
    }
    return acc.real();
}

void apply_dense(const CMat& u, StateVector& s) {
    if (u.rows != static_cast<int>(s.size()) || u.cols != u.rows) {
        throw std::invalid_argument("apply_dense: dimension mismatch");
    }
    std::vector<std::complex<double>> out(s.size(), {0.0, 0.0});
    for (int i = 0; i < u.rows; ++i) {
        std::complex<double> acc = 0.0;
        const std::complex<double>* row = u.a.data() + static_cast<std::size_t>(i) * u.cols;
        for (int j = 0; j < u.cols; ++j) acc += row[j] * s.amp(j);
        out[i] = acc;
    }
    for (std::size_t i = 0; i < s.size(); ++i) s.amp(i) = out[i];
}

void dump_state(const StateVector& s, std::ostream& out) {
    uint32_t n = s.n_qubits();
    out.write(reinterpret_cast<const char*>(&n), 4);
    for (std::size_t i = 0; i < s.size(); ++i) {
        double re = s.amp(i).real();
        double im = s.amp(i).imag();
        out.write(reinterpret_cast<const char*>(&re), 8);
        out.write(reinterpret_cast<const char*>(&im), 8);
    }
}

StateVector load_state(std::istream& in) {
    uint32_t n = 0;
    in.read(reinterpret_cast<char*>(&n), 4);
    if (!in) throw std::runtime_error("load_state: truncated header");
    StateVector s(n);
    for (std::size_t i = 0; i < s.size(); ++i) {
        double re = 0.0, im = 0.0;
        in.read(reinterpret_cast<char*>(&re), 8);
        in.read(reinterpret_cast<char*>(&im), 8);
        if (!in) throw std::runtime_error("load_state: truncated amplitudes");
        s.amp(i) = {re, im};
    }
    return s;
}

}  // namespace qml
