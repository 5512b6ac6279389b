#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qml/datasets.hpp"
#include "qml/linalg.hpp"
#include "qml/observable.hpp"
#include "qml/pauli.hpp"
#include "qml/state.hpp"

namespace qml {

struct CoeffRow {
    PauliString str;
    int multiplicity;  // windows producing this string (overlaps kept once)
    int weight;
    double mean;
    double sd;         // unbiased sample SD
    double alpha_hat;  // unbiased variance estimate
    bool constant;     // sd == 0; excluded from whitening and averages
};

// Pauli-coefficient matrix A (rows = strings, cols = samples) with per-row
// statistics and variance-whitened column-norm extremes.
struct CoeffStats {
    std::vector<CoeffRow> rows;
    std::vector<double> a;  // row-major rows x samples
    int n_samples = 0;
    int window_size = 0;
    int multiplicity_total = 0;  // (3^S - 1)|Q| for the XYZ window set
    double haar_ref = 0.0;       // 1 / (2^N + 1)
    double alpha_min = 0.0, alpha_max = 0.0;  // over non-constant rows
    double aq_min = 0.0, aq_max = 0.0;        // column-norm extremes of the
                                              // whitened matrix, x 1/sqrt(rows)
};

// Rows from the window construction: strings whose window-restricted letters
// lie in {X,Y,Z}^S minus the all-Z string (XYZ family) or in {X,Y}^S (XY
// family); identity off-window. Duplicates across overlapping windows are
// kept once with multiplicity.
CoeffStats coeff_matrix(std::span<const StateVector> states, const WindowAssignment& windows,
                        HamiltonianFamily family);

// Same statistics over an explicit index set.
CoeffStats coeff_matrix_for_strings(std::span<const StateVector> states,
                                    std::vector<PauliString> strings, int window_size);

struct MeanStat {
    std::vector<double> per_row;  // |mean/SD| for non-constant rows, aligned with stats.rows
    double weight_s_mean = 0.0;   // average over rows with support size == S
    int excluded_constant = 0;
};
MeanStat mean_statistic(const CoeffStats& stats);

struct BoundReport {
    std::string quantity;
    double empirical_min = 0.0;
    double empirical_max = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    double leading = 0.0;   // leading term, where the bound has one
    double fitted_slack = 0.0;
    double delta = 0.0;
    double k = 0.0;
    bool pass = false;
    bool vacuous = false;  // Delta_S = 0: lower bracket carries no content
};

// lambda_max[K] against ||O||_F^2/4^N (1 + C |A| sqrt(ln|A|) / (2^N delta));
// reports the fitted C and checks lambda_max <= 2 x leading term.
BoundReport spectrum_bound_haar(const SymMatrix& k, const LocalZObservable& obs, uint32_t n,
                                    int size_train, double delta);

// Bracket on the theta=0 QNTK spectrum. XYZ family uses the coefficient
// statistics; the XY/embedding family uses the closed 2^{-S} form.
BoundReport spectrum_bracket(const SymMatrix& k0, const CoeffStats& stats,
                                 const LocalZObservable& obs, HamiltonianFamily family, double k,
                                 double delta);

// C0 = (||J_now - J_init||_2 / (sqrt(D) ||theta_now - theta_init||_2))^2.
// Spectral norm by power iteration (200 steps, 1e-8 relative tolerance).
// Throws on zero parameter displacement.
double smoothness_coefficient(std::span<const double> j_now, std::span<const double> j_init, int depth,
                              int n_samples, std::span<const double> theta_now,
                              std::span<const double> theta_init);

struct MomentCheckReport {
    double first_dev_sigma = 0.0;   // |MC mean - exact| / SE, first identity
    double second_dev_sigma = 0.0;  // same for the second identity
    double first_exact = 0.0;
    double first_mc = 0.0;
    double second_exact = 0.0;
    double second_mc = 0.0;
    int trials = 0;
    bool pass = false;  // both within 5 sigma
};

// Monte Carlo over Haar unitaries validates the two trace identities (t = 1
// and t = 2 moments) on fixed random test matrices.
MomentCheckReport tdesign_moment_check(uint32_t n, int trials, uint64_t seed);

}  // namespace qml
