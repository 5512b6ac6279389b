#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qml/datasets.hpp"
#include "qml/linalg.hpp"
#include "qml/state.hpp"

namespace qml {

// Training gram matrix k_ab = |<psi_a|psi_b>|^2 (symmetric, unit diagonal).
SymMatrix gram_matrix(std::span<const StateVector> states);

// Cross kernel, row-major rows.size() x cols.size().
std::vector<double> gram_cross(std::span<const StateVector> rows, std::span<const StateVector> cols);

struct KernelFit {
    std::vector<double> theta;  // theta(infinity) = (k + ridge I)^{-1} y
    double ridge_used;
};
KernelFit fit(const SymMatrix& k, std::span<const double> y, double ridge = 0.0);

// z = k_cross theta.
std::vector<double> predict(std::span<const double> k_cross, int n_test, std::span<const double> theta);

// r_b(inf) = r_b(0) - k_cross k^{-1} r_A(0), via one SPD solve.
std::vector<double> test_residuals_final(std::span<const double> k_cross, int n_test,
                                         const SymMatrix& k_train, std::span<const double> r0_train,
                                         std::span<const double> r0_test, double ridge = 0.0);

struct GenErrorResult {
    double value;           // R = L_B(inf) - L_B(0), via the two-term expansion
    std::vector<double> g;  // metric g_ba = [k_cross k^{-1}]_ba, row-major n_test x n_train
};
GenErrorResult relative_generalization_error(const SymMatrix& k_train, std::span<const double> k_cross,
                                             int n_test, std::span<const double> r0_train,
                                             std::span<const double> r0_test, double ridge = 0.0);

struct QkmCurseConfig {
    uint32_t n = 10;
    int size_train = 16;
    int size_test = 16;
    int trials = 50;
    uint64_t seed = 0;
    double heisenberg_t = 1.0;
    double obs_variance = 1.0;
};

struct CurseTrialRow {
    int trial;
    double loss_train_0;
    double loss_test_0;
    double loss_test_inf;
    double bound;  // per-trial bound term L_B(0) - |A|/2^{N-1} sqrt(L_A(0) L_B(0))
};

struct QkmCurseSummary {
    std::vector<CurseTrialRow> rows;
    double mean_loss_train_0 = 0.0;
    double mean_loss_test_0 = 0.0;
    double mean_loss_test_inf = 0.0;
    double mean_sqrt_product = 0.0;  // E sqrt(L_A(0) L_B(0))
    double bound = 0.0;              // E L_B(0) - |A|/2^{N-1} E sqrt(...)
    double bound_margin = 0.0;       // E L_B(inf) - bound
    double bound_margin_se = 0.0;    // jackknife SE of the margin
    bool bound_holds_2se = false;
    double relative_improvement = 0.0;  // (E L_B(0) - E L_B(inf)) / E L_B(0)
    double relative_improvement_se = 0.0;
    std::vector<std::string> warnings;
};

// Monte Carlo over Haar datasets with Heisenberg-target labels and theta(0)=0.
QkmCurseSummary curse_experiment_qkm(const QkmCurseConfig& config);

}  // namespace qml
