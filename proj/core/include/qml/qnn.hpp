#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qml/datasets.hpp"
#include "qml/linalg.hpp"
#include "qml/observable.hpp"
#include "qml/pauli.hpp"
#include "qml/state.hpp"

namespace qml {

struct Gate {
    std::vector<int> window;          // qubit subset the generator acts on
    PauliString generator;            // nonidentity exactly on the window
    std::vector<FixedGate> pre_gates; // fixed W_d applied before the rotation
};

// V(theta) applies, for d = 1..D: the pre-gates W_d, then exp(-i H_d theta_d / 2).
struct Ansatz {
    uint32_t n_qubits = 0;
    int window_size = 0;
    HamiltonianFamily family = HamiltonianFamily::XYZ;
    std::vector<Gate> gates;

    int depth() const { return static_cast<int>(gates.size()); }
};

// Layer-by-layer over the assignment's windows (1D: gate d uses window
// d mod N, a non-multiple depth leaves the last layer partial, with a
// warning); all-to-all draws a fresh uniform window per gate. Generators are
// uniform over the family restricted to the window. No pre-gates.
Ansatz sample_ansatz(uint32_t n, int s, int d_total, const WindowAssignment& windows,
                     HamiltonianFamily family, Rng& rng);

// Distinct windows used by the ansatz, in first-use order (the assignment Q
// seen by the spectrum analysis).
WindowAssignment ansatz_windows(const Ansatz& ansatz);

// z = <psi| V(theta)^dag O V(theta) |psi>
double forward(const Ansatz& ansatz, std::span<const double> theta, const StateVector& state,
               const LocalZObservable& obs);

// Exact derivatives by a reverse sweep holding |psi_d> = V_{d:1}|psi> and
// |phi_d> = V_{D:d+1}^dag O V|psi>; J_{da} = Im <phi_d| H_d |psi_d>.
// J is stored column-major: column a (length D) is contiguous.
struct JacobianResult {
    std::vector<double> j;  // D x M, j[a * D + d]
    std::vector<double> z;  // model outputs, length M
    int depth = 0;
};
JacobianResult jacobian(const Ansatz& ansatz, std::span<const double> theta,
                        std::span<const StateVector> states, const LocalZObservable& obs);

// K = J^T J / D.
SymMatrix qntk(const JacobianResult& jac);

struct TrainConfig {
    double eta0 = 0.0;             // learning rate eta = eta0 |A| / D
    std::optional<double> eta;     // explicit eta overrides eta0
    int steps = 200;
    int record_every = 10;
    std::optional<long> shots;     // gradient-level Gaussian shot noise
    std::optional<double> noise_sd_override;  // replaces ||O||_2 sqrt(2/shots)
    uint64_t seed = 0;
};

struct TraceRow {
    int step;
    double loss_train;
    double loss_test;
    double test_error;
    double grad_norm;
    double lmin_k;
    double lmax_k;
    double theta_dist;
    double smooth_c0;
};

struct TrainingTrace {
    std::vector<TraceRow> rows;
    std::vector<double> loss_history;  // training loss at every step 0..T
    std::vector<double> theta_final;
    double eta_used = 0.0;
    bool has_test = false;
};

TrainingTrace train_gd(const Ansatz& ansatz, const Dataset& train, const Dataset* test,
                       const LocalZObservable& obs, const TrainConfig& config);

// Frozen-QNTK closed form: z_B(inf) = z_B(0) - Ktilde K^{-1} r_A(0).
struct FrozenPrediction {
    std::vector<double> z_test_inf;
    double loss_test_inf;
    double ridge_used;
};
FrozenPrediction frozen_kernel_predict(std::span<const double> j_union, int depth, int n_train,
                                       int n_test, std::span<const double> z0_union,
                                       std::span<const double> y_train, std::span<const double> y_test);

struct QnnCurseConfig {
    uint32_t n = 6;
    int size_train = 10;
    int size_test = 10;
    int trials = 50;
    int window_size = 2;
    int depth = 120;
    uint64_t seed = 0;
    double obs_variance = 1.0;
};

struct QnnCurseSummary {
    struct Row {
        int trial;
        double loss_test_0;
        double loss_test_inf;
    };
    std::vector<Row> rows;
    double mean_loss_test_0 = 0.0;
    double mean_loss_test_inf = 0.0;
    double bound_factor = 0.0;  // 1 - |A| / (2^{2N} - 1)
    double bound_margin = 0.0;  // E L_B(inf) - factor * E L_B(0)
    double bound_margin_se = 0.0;
    bool bound_holds_2se = false;
};

// Monte Carlo over Haar data and Haar targets under the frozen QNTK regime.
QnnCurseSummary curse_experiment_qnn(const QnnCurseConfig& config);

}  // namespace qml
