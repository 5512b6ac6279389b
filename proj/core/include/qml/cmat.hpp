#pragma once

#include <complex>
#include <vector>

#include "qml/rng.hpp"

namespace qml {

// Small dense complex matrix, row-major. Sized for 2^N <= 4096.
struct CMat {
    int rows = 0;
    int cols = 0;
    std::vector<std::complex<double>> a;

    CMat() = default;
    CMat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, {0.0, 0.0}) {}

    std::complex<double>& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    const std::complex<double>& operator()(int i, int j) const {
        return a[static_cast<std::size_t>(i) * cols + j];
    }

    static CMat eye(int n);
};

CMat matmul(const CMat& x, const CMat& y);
CMat adjoint(const CMat& x);
CMat kron(const CMat& x, const CMat& y);
std::complex<double> trace(const CMat& x);
double max_abs_diff(const CMat& x, const CMat& y);

// Haar-random unitary: QR of a complex Ginibre matrix with the R diagonal
// phase fix.
CMat haar_unitary(int dim, Rng& rng);

}  // namespace qml
