#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

namespace qml {

// Real symmetric matrix, packed lower triangle.
class SymMatrix {
  public:
    explicit SymMatrix(int order) : n_(order), tri_(static_cast<std::size_t>(order) * (order + 1) / 2, 0.0) {
        if (order < 1) throw std::invalid_argument("SymMatrix: order must be positive");
    }

    int order() const { return n_; }

    double& at(int i, int j) { return tri_[pack(i, j)]; }
    double at(int i, int j) const { return tri_[pack(i, j)]; }

    double trace() const;
    double frob_norm() const;

    std::vector<double> to_dense() const;  // row-major n x n

  private:
    std::size_t pack(int i, int j) const {
        if (j > i) std::swap(i, j);
        return static_cast<std::size_t>(i) * (i + 1) / 2 + j;
    }

    int n_;
    std::vector<double> tri_;
};

struct EigResult {
    std::vector<double> values;   // ascending
    std::vector<double> vectors;  // row-major n x n, column j = eigenvector j
};

// Cyclic Jacobi rotations; m = V diag(values) V^T.
EigResult sym_eig(const SymMatrix& m);

// Eigenvalues only of a dense row-major symmetric matrix (no vector
// accumulation; used for spectrum traces).
std::vector<double> sym_eigvals_dense(std::vector<double> a, int n);

struct SingularKernelError : std::runtime_error {
    explicit SingularKernelError(const std::string& what) : std::runtime_error(what) {}
};

// Solves (m + ridge I) x = rhs by Cholesky. Throws SingularKernelError on a
// non-positive pivot.
std::vector<double> spd_solve(const SymMatrix& m, std::span<const double> rhs, double ridge = 0.0);

struct LadderSolve {
    std::vector<double> x;
    double ridge_used;
    bool escalated;  // true when the requested ridge had to be raised
};

// spd_solve with the retry ladder 1e-12, 1e-10, 1e-8 on Cholesky failure.
// Fails with a condition-number estimate when the ladder is exhausted.
LadderSolve spd_solve_ladder(const SymMatrix& m, std::span<const double> rhs, double ridge = 0.0);

// Complex Hermitian matrix, full row-major storage.
class HermMatrix {
  public:
    explicit HermMatrix(int order)
        : n_(order), a_(static_cast<std::size_t>(order) * order, {0.0, 0.0}) {
        if (order < 1) throw std::invalid_argument("HermMatrix: order must be positive");
    }

    int order() const { return n_; }
    std::complex<double>& at(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
    const std::complex<double>& at(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

  private:
    int n_;
    std::vector<std::complex<double>> a_;
};

// exp(-i scale h), row-major dense unitary. Real-valued h takes the direct
// n x n path; a genuinely complex h goes through the real embedding of
// doubled order so the same Jacobi kernel serves both.
std::vector<std::complex<double>> herm_expm(const HermMatrix& h, double scale);

}  // namespace qml
