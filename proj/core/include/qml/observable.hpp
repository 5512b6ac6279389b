#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qml/rng.hpp"

namespace qml {

// O = sum_k o_k Z_k. Spectral norm is sum |o_k| exactly (the Z_k commute);
// Frobenius norm squared is 2^N sum o_k^2 (Pauli orthogonality); trace zero.
class LocalZObservable {
  public:
    explicit LocalZObservable(std::vector<double> coeffs);

    uint32_t n_qubits() const { return static_cast<uint32_t>(o_.size()); }
    double coeff(uint32_t k) const { return o_[k]; }
    std::span<const double> coeffs() const { return o_; }

    double spectral_norm() const;
    double frob_norm_sq() const;

  private:
    std::vector<double> o_;
};

// o_k i.i.d. normal, mean zero, given variance.
LocalZObservable sample_coeffs(uint32_t n, double variance, Rng& rng);

// Exact brute-force minimum of (g^T o)^2 over g in {0,+-1}^N with support
// size between 1 and s. Enumerates supports by increasing weight,
// lexicographic within weight, early exit on exact zero. Rejects s with more
// than ~3e5 patterns rather than approximating.
double delta_s(const LocalZObservable& obs, int s);

}  // namespace qml
