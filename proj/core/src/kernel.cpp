#include "qml/kernel.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "qml/parallel.hpp"
#include "qml/stats.hpp"

namespace qml {

SymMatrix gram_matrix(std::span<const StateVector> states) {
    const int m = static_cast<int>(states.size());
    if (m < 1) throw std::invalid_argument("gram_matrix: empty state list");
    SymMatrix k(m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j <= i; ++j) k.at(i, j) = fidelity(states[i], states[j]);
    }
    return k;
}

std::vector<double> gram_cross(std::span<const StateVector> rows, std::span<const StateVector> cols) {
    std::vector<double> k(rows.size() * cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) {
            k[i * cols.size() + j] = fidelity(rows[i], cols[j]);
        }
    }
    return k;
}

KernelFit fit(const SymMatrix& k, std::span<const double> y, double ridge) {
    LadderSolve sol = spd_solve_ladder(k, y, ridge);
    return {std::move(sol.x), sol.ridge_used};
}

std::vector<double> predict(std::span<const double> k_cross, int n_test, std::span<const double> theta) {
    const std::size_t m = theta.size();
    if (k_cross.size() != static_cast<std::size_t>(n_test) * m) {
        throw std::invalid_argument("predict: shape mismatch");
    }
    std::vector<double> z(n_test, 0.0);
    for (int b = 0; b < n_test; ++b) {
        for (std::size_t a = 0; a < m; ++a) z[b] += k_cross[b * m + a] * theta[a];
    }
    return z;
}

std::vector<double> test_residuals_final(std::span<const double> k_cross, int n_test,
                                         const SymMatrix& k_train, std::span<const double> r0_train,
                                         std::span<const double> r0_test, double ridge) {
    if (static_cast<int>(r0_test.size()) != n_test) {
        throw std::invalid_argument("test_residuals_final: r0_test size mismatch");
    }
    LadderSolve w = spd_solve_ladder(k_train, r0_train, ridge);
    std::vector<double> correction = predict(k_cross, n_test, w.x);
    std::vector<double> r(n_test);
    for (int b = 0; b < n_test; ++b) r[b] = r0_test[b] - correction[b];
    return r;
}

GenErrorResult relative_generalization_error(const SymMatrix& k_train, std::span<const double> k_cross,
                                             int n_test, std::span<const double> r0_train,
                                             std::span<const double> r0_test, double ridge) {
    const int m = k_train.order();
    if (static_cast<int>(r0_train.size()) != m || static_cast<int>(r0_test.size()) != n_test) {
        throw std::invalid_argument("relative_generalization_error: shape mismatch");
    }
    // g^T column a solves k g_col = k_cross column; assemble g row-major.
    GenErrorResult out;
    out.g.assign(static_cast<std::size_t>(n_test) * m, 0.0);
    std::vector<double> col(m);
    for (int b = 0; b < n_test; ++b) {
        for (int a = 0; a < m; ++a) col[a] = k_cross[static_cast<std::size_t>(b) * m + a];
        LadderSolve sol = spd_solve_ladder(k_train, col, ridge);
        for (int a = 0; a < m; ++a) out.g[static_cast<std::size_t>(b) * m + a] = sol.x[a];
    }
    // Two-term expansion: R = (1/2|B|) ||g r0_A||^2 - (1/|B|) <r0_B, g r0_A>.
    double quad = 0.0, cross = 0.0;
    for (int b = 0; b < n_test; ++b) {
        double gb = 0.0;
        for (int a = 0; a < m; ++a) gb += out.g[static_cast<std::size_t>(b) * m + a] * r0_train[a];
        quad += gb * gb;
        cross += gb * r0_test[b];
    }
    out.value = quad / (2.0 * n_test) - cross / n_test;
    return out;
}

QkmCurseSummary curse_experiment_qkm(const QkmCurseConfig& config) {
    QkmCurseSummary summary;
    const double regime_limit = std::pow(2.0, config.n / 2.0);
    if (static_cast<double>(config.size_train) >= regime_limit) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "training size %d is not below 2^{N/2}=%.1f; outside the analyzed random-data regime",
                      config.size_train, regime_limit);
        summary.warnings.emplace_back(buf);
        std::fprintf(stderr, "warning: %s\n", buf);
    }

    const CMat target = heisenberg_unitary(config.n, config.heisenberg_t);
    const int trials = config.trials;
    summary.rows.resize(trials);
    const double size_factor = static_cast<double>(config.size_train) / std::pow(2.0, config.n - 1.0);

    parallel_for(static_cast<std::size_t>(trials), [&](std::size_t t) {
        Rng obs_rng = substream(config.seed, {1, t});
        LocalZObservable obs = sample_coeffs(config.n, config.obs_variance, obs_rng);

        Provenance ptrain{.generator = "haar", .seed = mix(config.seed, 2 * t + 2), .n_qubits = config.n,
                          .count = config.size_train, .split = "train"};
        Provenance ptest{.generator = "haar", .seed = mix(config.seed, 2 * t + 3), .n_qubits = config.n,
                         .count = config.size_test, .split = "test"};
        Dataset train = generate_dataset(ptrain);
        Dataset test = generate_dataset(ptest);
        train.labels = label_with_target(train.states, target, obs);
        test.labels = label_with_target(test.states, target, obs);

        // theta(0) = 0, so r(0) = -y on both sets.
        std::vector<double> r0_train(train.labels.size()), r0_test(test.labels.size());
        for (std::size_t i = 0; i < r0_train.size(); ++i) r0_train[i] = -train.labels[i];
        for (std::size_t i = 0; i < r0_test.size(); ++i) r0_test[i] = -test.labels[i];

        SymMatrix k = gram_matrix(train.states);
        std::vector<double> k_cross = gram_cross(test.states, train.states);
        std::vector<double> r_inf =
            test_residuals_final(k_cross, config.size_test, k, r0_train, r0_test);

        CurseTrialRow& row = summary.rows[t];
        row.trial = static_cast<int>(t);
        row.loss_train_0 = mse_loss(r0_train);
        row.loss_test_0 = mse_loss(r0_test);
        row.loss_test_inf = mse_loss(r_inf);
        row.bound = row.loss_test_0 - size_factor * std::sqrt(row.loss_train_0 * row.loss_test_0);
    });

    std::vector<double> la0(trials), lb0(trials), lbinf(trials), sq(trials);
    for (int t = 0; t < trials; ++t) {
        la0[t] = summary.rows[t].loss_train_0;
        lb0[t] = summary.rows[t].loss_test_0;
        lbinf[t] = summary.rows[t].loss_test_inf;
        sq[t] = std::sqrt(la0[t] * lb0[t]);
    }
    summary.mean_loss_train_0 = mean(la0);
    summary.mean_loss_test_0 = mean(lb0);
    summary.mean_loss_test_inf = mean(lbinf);
    summary.mean_sqrt_product = mean(sq);
    summary.bound = summary.mean_loss_test_0 - size_factor * summary.mean_sqrt_product;
    summary.bound_margin = summary.mean_loss_test_inf - summary.bound;

    auto loo_mean = [](std::span<const double> v, long skip) {
        double s = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (static_cast<long>(i) != skip) s += v[i];
        }
        return s / static_cast<double>(skip < 0 ? v.size() : v.size() - 1);
    };
    summary.bound_margin_se = jackknife_se(static_cast<std::size_t>(trials), [&](long skip) {
        return loo_mean(lbinf, skip) - loo_mean(lb0, skip) + size_factor * loo_mean(sq, skip);
    });
    summary.bound_holds_2se = summary.bound_margin >= -2.0 * summary.bound_margin_se;

    summary.relative_improvement =
        (summary.mean_loss_test_0 - summary.mean_loss_test_inf) / summary.mean_loss_test_0;
    summary.relative_improvement_se = jackknife_se(static_cast<std::size_t>(trials), [&](long skip) {
        double m0 = loo_mean(lb0, skip);
        return (m0 - loo_mean(lbinf, skip)) / m0;
    });
    return summary;
}

}  // namespace qml
