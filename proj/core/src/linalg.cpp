#include "qml/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

namespace qml {

double SymMatrix::trace() const {
    double t = 0.0;
    for (int i = 0; i < n_; ++i) t += at(i, i);
    return t;
}

double SymMatrix::frob_norm() const {
    double s = 0.0;
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) s += at(i, j) * at(i, j);
    }
    return std::sqrt(s);
}

std::vector<double> SymMatrix::to_dense() const {
    std::vector<double> a(static_cast<std::size_t>(n_) * n_);
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) a[static_cast<std::size_t>(i) * n_ + j] = at(i, j);
    }
    return a;
}

namespace {

// Cyclic-by-row Jacobi on a dense row-major symmetric matrix. When vecs is
// non-null the rotations are accumulated there (must start as identity).
void jacobi_sweep_driver(std::vector<double>& a, int n, std::vector<double>* vecs) {
    auto idx = [n](int i, int j) { return static_cast<std::size_t>(i) * n + j; };
    double norm = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) norm += a[k] * a[k];
    norm = std::sqrt(norm);
    if (norm == 0.0) return;
    const double stop = 1e-15 * norm;
    const int max_sweeps = 64;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) off += a[idx(i, j)] * a[idx(i, j)];
        }
        off = std::sqrt(2.0 * off);
        if (off <= stop) return;

        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double apq = a[idx(p, q)];
                if (apq == 0.0) continue;
                double app = a[idx(p, p)];
                double aqq = a[idx(q, q)];
                // Skip rotations that cannot move the off norm.
                if (std::abs(apq) < 1e-18 * (std::abs(app) + std::abs(aqq) + 1e-300)) {
                    continue;
                }
                double tau = (aqq - app) / (2.0 * apq);
                double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                        : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = t * c;

                double* rp = a.data() + idx(p, 0);
                double* rq = a.data() + idx(q, 0);
                for (int k = 0; k < n; ++k) {
                    double akp = rp[k];
                    double akq = rq[k];
                    rp[k] = c * akp - s * akq;
                    rq[k] = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double akp = a[idx(k, p)];
                    double akq = a[idx(k, q)];
                    a[idx(k, p)] = c * akp - s * akq;
                    a[idx(k, q)] = s * akp + c * akq;
                }
                if (vecs) {
                    double* v = vecs->data();
                    for (int k = 0; k < n; ++k) {
                        double vkp = v[idx(k, p)];
                        double vkq = v[idx(k, q)];
                        v[idx(k, p)] = c * vkp - s * vkq;
                        v[idx(k, q)] = s * vkp + c * vkq;
                    }
                }
            }
        }
    }
}

}  // namespace

EigResult sym_eig(const SymMatrix& m) {
    const int n = m.order();
    std::vector<double> a = m.to_dense();
    std::vector<double> v(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i) * n + i] = 1.0;

    jacobi_sweep_driver(a, n, &v);

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        return a[static_cast<std::size_t>(i) * n + i] < a[static_cast<std::size_t>(j) * n + j];
    });

    EigResult out;
    out.values.resize(n);
    out.vectors.resize(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j) {
        int src = order[j];
        out.values[j] = a[static_cast<std::size_t>(src) * n + src];
        for (int i = 0; i < n; ++i) {
            out.vectors[static_cast<std::size_t>(i) * n + j] = v[static_cast<std::size_t>(i) * n + src];
        }
    }
    return out;
}

std::vector<double> sym_eigvals_dense(std::vector<double> a, int n) {
    jacobi_sweep_driver(a, n, nullptr);
    std::vector<double> vals(n);
    for (int i = 0; i < n; ++i) vals[i] = a[static_cast<std::size_t>(i) * n + i];
    std::sort(vals.begin(), vals.end());
    return vals;
}

namespace {

// Packed lower-triangular Cholesky. Returns false on a non-positive pivot.
bool cholesky(const SymMatrix& m, double ridge, std::vector<double>& l) {
    const int n = m.order();
    l.assign(static_cast<std::size_t>(n) * (n + 1) / 2, 0.0);
    auto li = [](int i, int j) { return static_cast<std::size_t>(i) * (i + 1) / 2 + j; };
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = m.at(i, j) + (i == j ? ridge : 0.0);
            for (int k = 0; k < j; ++k) s -= l[li(i, k)] * l[li(j, k)];
            if (i == j) {
                if (s <= 0.0) return false;
                l[li(i, i)] = std::sqrt(s);
            } else {
                l[li(i, j)] = s / l[li(j, j)];
            }
        }
    }
    return true;
}

std::vector<double> cholesky_solve(const std::vector<double>& l, int n, std::span<const double> rhs) {
    auto li = [](int i, int j) { return static_cast<std::size_t>(i) * (i + 1) / 2 + j; };
    std::vector<double> x(rhs.begin(), rhs.end());
    for (int i = 0; i < n; ++i) {
        double s = x[i];
        for (int k = 0; k < i; ++k) s -= l[li(i, k)] * x[k];
        x[i] = s / l[li(i, i)];
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = x[i];
        for (int k = i + 1; k < n; ++k) s -= l[li(k, i)] * x[k];
        x[i] = s / l[li(i, i)];
    }
    return x;
}

}  // namespace

std::vector<double> spd_solve(const SymMatrix& m, std::span<const double> rhs, double ridge) {
    if (static_cast<int>(rhs.size()) != m.order()) {
        throw std::invalid_argument("spd_solve: rhs size mismatch");
    }
    if (ridge < 0.0) throw std::invalid_argument("spd_solve: ridge must be nonnegative");
    std::vector<double> l;
    if (!cholesky(m, ridge, l)) {
        throw SingularKernelError("spd_solve: matrix is not positive definite at ridge=" + std::to_string(ridge));
    }
    return cholesky_solve(l, m.order(), rhs);
}

LadderSolve spd_solve_ladder(const SymMatrix& m, std::span<const double> rhs, double ridge) {
    if (static_cast<int>(rhs.size()) != m.order()) {
        throw std::invalid_argument("spd_solve_ladder: rhs size mismatch");
    }
    static const double kLadder[] = {1e-12, 1e-10, 1e-8};
    std::vector<double> l;
    if (cholesky(m, ridge, l)) {
        return {cholesky_solve(l, m.order(), rhs), ridge, false};
    }
    for (double r : kLadder) {
        if (r <= ridge) continue;
        if (cholesky(m, r, l)) {
            std::fprintf(stderr, "warning: kernel not positive definite at ridge=%g, retried with ridge=%g\n",
                         ridge, r);
            return {cholesky_solve(l, m.order(), rhs), r, true};
        }
    }
    auto eig = sym_eig(m);
    double lmin = eig.values.front();
    double lmax = eig.values.back();
    double cond = (lmin > 0.0) ? lmax / lmin : std::numeric_limits<double>::infinity();
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "singular kernel: ridge ladder exhausted (lambda_min=%.3e, lambda_max=%.3e, cond=%.3e)",
                  lmin, lmax, cond);
    throw SingularKernelError(buf);
}

std::vector<std::complex<double>> herm_expm(const HermMatrix& h, double scale) {
    const int n = h.order();
    bool real_valued = true;
    for (int i = 0; i < n && real_valued; ++i) {
        for (int j = 0; j < n; ++j) {
            if (h.at(i, j).imag() != 0.0) {
                real_valued = false;
                break;
            }
        }
    }

    std::vector<std::complex<double>> u(static_cast<std::size_t>(n) * n, {0.0, 0.0});
    auto ui = [n](int i, int j) { return static_cast<std::size_t>(i) * n + j; };

    if (real_valued) {
        SymMatrix m(n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j <= i; ++j) m.at(i, j) = h.at(i, j).real();
        }
        EigResult eig = sym_eig(m);
        // U = V diag(exp(-i scale lambda)) V^T
        for (int k = 0; k < n; ++k) {
            std::complex<double> ph = std::polar(1.0, -scale * eig.values[k]);
            for (int i = 0; i < n; ++i) {
                double vik = eig.vectors[static_cast<std::size_t>(i) * n + k];
                if (vik == 0.0) continue;
                std::complex<double> w = ph * vik;
                for (int j = 0; j < n; ++j) {
                    u[ui(i, j)] += w * eig.vectors[static_cast<std::size_t>(j) * n + k];
                }
            }
        }
        return u;
    }

    // Real embedding M = [[Re h, -Im h], [Im h, Re h]]; every real eigenvector
    // [x; y] of M yields a complex eigenvector x + i y of h, and summing
    // exp(-i scale lambda) w w^dag /2 over all 2n of them rebuilds the
    // spectral decomposition without pairing degenerate vectors.
    const int m2 = 2 * n;
    SymMatrix m(m2);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            m.at(i, j) = h.at(i, j).real();
            m.at(n + i, n + j) = h.at(i, j).real();
        }
        // Lower-left block holds Im h; the mirrored upper-right block is its
        // transpose, which equals -Im h by antisymmetry, as required.
        for (int j = 0; j < n; ++j) m.at(n + i, j) = h.at(i, j).imag();
    }
    EigResult eig = sym_eig(m);
    std::vector<std::complex<double>> w(n);
    for (int k = 0; k < m2; ++k) {
        for (int i = 0; i < n; ++i) {
            w[i] = {eig.vectors[static_cast<std::size_t>(i) * m2 + k],
                    eig.vectors[static_cast<std::size_t>(n + i) * m2 + k]};
        }
        std::complex<double> ph = 0.5 * std::polar(1.0, -scale * eig.values[k]);
        for (int i = 0; i < n; ++i) {
            std::complex<double> wi = ph * w[i];
            if (wi == 0.0) continue;
            for (int j = 0; j < n; ++j) u[ui(i, j)] += wi * std::conj(w[j]);
        }
    }
    return u;
}

}  // namespace qml
