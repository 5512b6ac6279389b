#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "qml/cmat.hpp"
#include "qml/pauli.hpp"

namespace qml {

class LocalZObservable;

// Dense pure state over N qubits. Amplitude order: qubit 0 is the most
// significant bit of the basis index, matching the "IXYZ" text order.
class StateVector {
  public:
    explicit StateVector(uint32_t n_qubits);
    static StateVector zero_state(uint32_t n_qubits);  // |0...0>
    static StateVector from_amplitudes(uint32_t n_qubits, std::vector<std::complex<double>> amps);

    uint32_t n_qubits() const { return n_; }
    std::size_t size() const { return amp_.size(); }
    std::complex<double>& amp(std::size_t i) { return amp_[i]; }
    const std::complex<double>& amp(std::size_t i) const { return amp_[i]; }
    std::span<const std::complex<double>> amplitudes() const { return amp_; }
    std::span<std::complex<double>> amplitudes() { return amp_; }

    double norm() const;
    void normalize();

  private:
    uint32_t n_;
    std::vector<std::complex<double>> amp_;
};

// s <- sigma_p s, by bit-mask index permutation plus per-amplitude phase.
void apply_pauli(StateVector& s, const PauliString& p);

// sigma_p |b> = phase |b'>; returns (b', phase).
std::pair<uint64_t, std::complex<double>> pauli_basis_action(const PauliString& p, uint64_t basis_index);

// s <- exp(-i p angle/2) s = cos(angle/2) s - i sin(angle/2) sigma_p s.
void apply_pauli_rotation(StateVector& s, const PauliString& p, double angle);

void apply_rx(StateVector& s, uint32_t qubit, double phi);
void apply_ry(StateVector& s, uint32_t qubit, double phi);
void apply_cz(StateVector& s, uint32_t control, uint32_t target);

struct FixedGate {
    enum class Kind { RX, RY, CZ };
    Kind kind;
    uint32_t q1 = 0;
    uint32_t q2 = 0;     // CZ target
    double angle = 0.0;  // RX/RY
};

void apply_fixed_gate(StateVector& s, const FixedGate& g);
FixedGate inverse(const FixedGate& g);

double expectation(const StateVector& s, const LocalZObservable& obs);

// s <- O s for O = sum_k o_k Z_k (diagonal in the computational basis).
void apply_observable(const LocalZObservable& obs, StateVector& s);

// <bra| sigma_p |ket>
std::complex<double> pauli_sandwich(const StateVector& bra, const PauliString& p, const StateVector& ket);

// |<a|b>|^2
double fidelity(const StateVector& a, const StateVector& b);

// <s| sigma_p |s> = Tr[rho sigma_p] (real for Hermitian sigma_p).
double pauli_coefficient(const StateVector& s, const PauliString& p);

// s <- U s for a dense 2^N x 2^N unitary.
void apply_dense(const CMat& u, StateVector& s);

// Binary dump: 4-byte little-endian qubit count, then interleaved (re, im)
// little-endian doubles.
void dump_state(const StateVector& s, std::ostream& out);
StateVector load_state(std::istream& in);

}  // namespace qml
