#include "qml/cmat.hpp"

#include <cmath>
#include <stdexcept>

namespace qml {

CMat CMat::eye(int n) {
    CMat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMat matmul(const CMat& x, const CMat& y) {
    if (x.cols != y.rows) throw std::invalid_argument("matmul: shape mismatch");
    CMat out(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i) {
        for (int k = 0; k < x.cols; ++k) {
            std::complex<double> xik = x(i, k);
            if (xik == 0.0) continue;
            for (int j = 0; j < y.cols; ++j) out(i, j) += xik * y(k, j);
        }
    }
    return out;
}

CMat adjoint(const CMat& x) {
    CMat out(x.cols, x.rows);
    for (int i = 0; i < x.rows; ++i) {
        for (int j = 0; j < x.cols; ++j) out(j, i) = std::conj(x(i, j));
    }
    return out;
}

CMat kron(const CMat& x, const CMat& y) {
    CMat out(x.rows * y.rows, x.cols * y.cols);
    for (int i = 0; i < x.rows; ++i) {
        for (int j = 0; j < x.cols; ++j) {
            std::complex<double> xij = x(i, j);
            if (xij == 0.0) continue;
            for (int p = 0; p < y.rows; ++p) {
                for (int q = 0; q < y.cols; ++q) {
                    out(i * y.rows + p, j * y.cols + q) = xij * y(p, q);
                }
            }
        }
    }
    return out;
}

std::complex<double> trace(const CMat& x) {
    std::complex<double> t = 0.0;
    for (int i = 0; i < std::min(x.rows, x.cols); ++i) t += x(i, i);
    return t;
}

double max_abs_diff(const CMat& x, const CMat& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw std::invalid_argument("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (std::size_t k = 0; k < x.a.size(); ++k) m = std::max(m, std::abs(x.a[k] - y.a[k]));
    return m;
}

CMat haar_unitary(int dim, Rng& rng) {
    CMat g(dim, dim);
    for (auto& v : g.a) v = {normal(rng), normal(rng)};

    // Modified Gram-Schmidt with one reorthogonalization pass; columns of a
    // Ginibre matrix are well conditioned, so this is numerically adequate
    // at the dimensions used here (<= 4096).
    CMat q = g;
    std::vector<std::complex<double>> rdiag(dim);
    for (int j = 0; j < dim; ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (int k = 0; k < j; ++k) {
                std::complex<double> dot = 0.0;
                for (int i = 0; i < dim; ++i) dot += std::conj(q(i, k)) * q(i, j);
                for (int i = 0; i < dim; ++i) q(i, j) -= dot * q(i, k);
            }
        }
        double norm = 0.0;
        for (int i = 0; i < dim; ++i) norm += std::norm(q(i, j));
        norm = std::sqrt(norm);
        rdiag[j] = norm;
        for (int i = 0; i < dim; ++i) q(i, j) /= norm;
    }
    // Phase fix: multiply column j by the phase of the original projection
    // <q_j, g_j> so the distribution is exactly Haar, not QR-convention
    // dependent.
    for (int j = 0; j < dim; ++j) {
        std::complex<double> dot = 0.0;
        for (int i = 0; i < dim; ++i) dot += std::conj(q(i, j)) * g(i, j);
        std::complex<double> ph = dot / std::abs(dot);
        for (int i = 0; i < dim; ++i) q(i, j) *= ph;
    }
    return q;
}

}  // namespace qml
