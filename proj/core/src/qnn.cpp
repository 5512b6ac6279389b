#include "qml/qnn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

#include "qml/analysis.hpp"
#include "qml/cmat.hpp"
#include "qml/parallel.hpp"
#include "qml/stats.hpp"

namespace qml {

Ansatz sample_ansatz(uint32_t n, int s, int d_total, const WindowAssignment& windows,
                     HamiltonianFamily family, Rng& rng) {
    if (d_total < 1) throw std::invalid_argument("sample_ansatz: depth must be positive");
    if (s < 1) throw std::invalid_argument("sample_ansatz: window size must be positive");
    Ansatz a;
    a.n_qubits = n;
    a.window_size = s;
    a.family = family;
    a.gates.reserve(d_total);

    const bool all_to_all = windows.connectivity == Connectivity::AllToAll;
    if (!all_to_all) {
        if (windows.windows.empty()) throw std::invalid_argument("sample_ansatz: empty window assignment");
        if (d_total % static_cast<int>(windows.windows.size()) != 0) {
            std::fprintf(stderr,
                         "warning: depth %d is not a multiple of %zu windows; last layer is partial\n",
                         d_total, windows.windows.size());
        }
    }

    const int letters = family == HamiltonianFamily::XYZ ? 3 : 2;
    for (int d = 0; d < d_total; ++d) {
        Gate g;
        if (all_to_all) {
            WindowAssignment one = make_windows(n, s, Connectivity::AllToAll, rng, 1);
            g.window = one.windows[0];
        } else {
            g.window = windows.windows[d % windows.windows.size()];
        }
        PauliString p = PauliString::identity(n);
        for (int q : g.window) {
            int code = 1 + static_cast<int>(uniform_index(rng, letters));
            p = p.with(static_cast<uint32_t>(q), code);
        }
        g.generator = p;
        a.gates.push_back(std::move(g));
    }
    return a;
}

WindowAssignment ansatz_windows(const Ansatz& ansatz) {
    WindowAssignment w;
    w.n_qubits = ansatz.n_qubits;
    w.window_size = ansatz.window_size;
    w.connectivity = Connectivity::AllToAll;
    std::set<std::vector<int>> seen;
    for (const Gate& g : ansatz.gates) {
        std::vector<int> sorted = g.window;
        std::sort(sorted.begin(), sorted.end());
        if (seen.insert(sorted).second) w.windows.push_back(sorted);
    }
    return w;
}

namespace {

void apply_gate(StateVector& s, const Gate& g, double theta) {
    for (const FixedGate& fg : g.pre_gates) apply_fixed_gate(s, fg);
    apply_pauli_rotation(s, g.generator, theta);
}

void undo_gate(StateVector& s, const Gate& g, double theta) {
    apply_pauli_rotation(s, g.generator, -theta);
    for (auto it = g.pre_gates.rbegin(); it != g.pre_gates.rend(); ++it) {
        apply_fixed_gate(s, inverse(*it));
    }
}

}  // namespace

double forward(const Ansatz& ansatz, std::span<const double> theta, const StateVector& state,
               const LocalZObservable& obs) {
    if (static_cast<int>(theta.size()) != ansatz.depth()) {
        throw std::invalid_argument("forward: parameter count mismatch");
    }
    StateVector psi = state;
    for (int d = 0; d < ansatz.depth(); ++d) apply_gate(psi, ansatz.gates[d], theta[d]);
    return expectation(psi, obs);
}

JacobianResult jacobian(const Ansatz& ansatz, std::span<const double> theta,
                        std::span<const StateVector> states, const LocalZObservable& obs) {
    const int depth = ansatz.depth();
    if (static_cast<int>(theta.size()) != depth) {
        throw std::invalid_argument("jacobian: parameter count mismatch");
    }
    JacobianResult out;
    out.depth = depth;
    out.j.assign(static_cast<std::size_t>(depth) * states.size(), 0.0);
    out.z.assign(states.size(), 0.0);

    parallel_for(states.size(), [&](std::size_t a) {
        StateVector psi = states[a];
        for (int d = 0; d < depth; ++d) apply_gate(psi, ansatz.gates[d], theta[d]);
        out.z[a] = expectation(psi, obs);

        StateVector phi = psi;
        apply_observable(obs, phi);
        double* col = out.j.data() + a * static_cast<std::size_t>(depth);
        for (int d = depth - 1; d >= 0; --d) {
            col[d] = pauli_sandwich(phi, ansatz.gates[d].generator, psi).imag();
            if (d > 0) {
                undo_gate(psi, ansatz.gates[d], theta[d]);
                undo_gate(phi, ansatz.gates[d], theta[d]);
            }
        }
    });
    return out;
}

SymMatrix qntk(const JacobianResult& jac) {
    const int m = static_cast<int>(jac.z.size());
    if (m < 1) throw std::invalid_argument("qntk: empty Jacobian");
    const int depth = jac.depth;
    SymMatrix k(m);
    for (int a = 0; a < m; ++a) {
        const double* ca = jac.j.data() + static_cast<std::size_t>(a) * depth;
        for (int b = 0; b <= a; ++b) {
            const double* cb = jac.j.data() + static_cast<std::size_t>(b) * depth;
            double s = 0.0;
            for (int d = 0; d < depth; ++d) s += ca[d] * cb[d];
            k.at(a, b) = s / depth;
        }
    }
    return k;
}

TrainingTrace train_gd(const Ansatz& ansatz, const Dataset& train, const Dataset* test,
                       const LocalZObservable& obs, const TrainConfig& config) {
    const int depth = ansatz.depth();
    const int m = static_cast<int>(train.size());
    if (m < 1) throw std::invalid_argument("train_gd: empty training set");
    if (config.steps < 1) throw std::invalid_argument("train_gd: need at least one step");
    const double eta =
        config.eta.has_value() ? *config.eta : config.eta0 * static_cast<double>(m) / depth;
    if (eta <= 0.0) throw std::invalid_argument("train_gd: learning rate must be positive");

    double noise_sd = 0.0;
    if (config.shots.has_value()) {
        noise_sd = config.noise_sd_override.has_value()
                       ? *config.noise_sd_override
                       : obs.spectral_norm() * std::sqrt(2.0 / static_cast<double>(*config.shots));
    }

    TrainingTrace trace;
    trace.eta_used = eta;
    trace.has_test = test != nullptr;
    std::vector<double> theta(depth, 0.0);

    std::vector<double> j0;      // Jacobian at step 0, for the smoothness trace
    const int record_every = std::max(1, config.record_every);

    for (int t = 0; t <= config.steps; ++t) {
        JacobianResult jac = jacobian(ansatz, theta, train.states, obs);
        std::vector<double> r(m);
        for (int a = 0; a < m; ++a) r[a] = jac.z[a] - train.labels[a];
        double loss = mse_loss(r);
        if (!std::isfinite(loss)) {
            throw std::runtime_error("train_gd: non-finite loss at step " + std::to_string(t) +
                                     " (learning rate too large?)");
        }
        trace.loss_history.push_back(loss);
        if (t == 0) j0 = jac.j;

        std::vector<double> grad(depth, 0.0);
        for (int a = 0; a < m; ++a) {
            const double* col = jac.j.data() + static_cast<std::size_t>(a) * depth;
            for (int d = 0; d < depth; ++d) grad[d] += col[d] * r[a];
        }
        double grad_norm_sq = 0.0;
        for (int d = 0; d < depth; ++d) {
            grad[d] /= m;
            grad_norm_sq += grad[d] * grad[d];
        }

        if (t % record_every == 0 || t == config.steps) {
            TraceRow row{};
            row.step = t;
            row.loss_train = loss;
            row.grad_norm = std::sqrt(grad_norm_sq);
            SymMatrix k = qntk(jac);
            std::vector<double> evals = sym_eigvals_dense(k.to_dense(), k.order());
            row.lmin_k = evals.front();
            row.lmax_k = evals.back();
            double dist_sq = 0.0;
            for (int d = 0; d < depth; ++d) dist_sq += theta[d] * theta[d];
            row.theta_dist = std::sqrt(dist_sq);
            std::vector<double> theta_init(depth, 0.0);
            row.smooth_c0 = (t == 0 || dist_sq == 0.0)
                                ? 0.0
                                : smoothness_coefficient(jac.j, j0, depth, m, theta, theta_init);
            if (test != nullptr) {
                std::vector<double> rt(test->size());
                int miss = 0;
                for (std::size_t b = 0; b < test->size(); ++b) {
                    double z = forward(ansatz, theta, test->states[b], obs);
                    rt[b] = z - test->labels[b];
                    if ((z >= 0.0) != (test->labels[b] >= 0.0)) ++miss;
                }
                row.loss_test = mse_loss(rt);
                row.test_error = static_cast<double>(miss) / static_cast<double>(test->size());
            } else {
                row.loss_test = 0.0;
                row.test_error = 0.0;
            }
            trace.rows.push_back(row);
        }
        if (t == config.steps) break;

        if (noise_sd > 0.0) {
            for (int d = 0; d < depth; ++d) {
                Rng nrng = substream(config.seed, {0x6e6f6973, static_cast<uint64_t>(t),
                                                   static_cast<uint64_t>(d)});
                grad[d] += normal(nrng, 0.0, noise_sd);
            }
        }
        for (int d = 0; d < depth; ++d) theta[d] -= eta * grad[d];
    }
    trace.theta_final = std::move(theta);
    return trace;
}

FrozenPrediction frozen_kernel_predict(std::span<const double> j_union, int depth, int n_train,
                                       int n_test, std::span<const double> z0_union,
                                       std::span<const double> y_train, std::span<const double> y_test) {
    if (static_cast<int>(z0_union.size()) != n_train + n_test ||
        static_cast<int>(j_union.size()) != depth * (n_train + n_test)) {
        throw std::invalid_argument("frozen_kernel_predict: shape mismatch");
    }
    FrozenPrediction out;
    out.z_test_inf.assign(z0_union.begin() + n_train, z0_union.end());
    out.ridge_used = 0.0;
    if (n_train > 0) {
        SymMatrix k(n_train);
        for (int a = 0; a < n_train; ++a) {
            const double* ca = j_union.data() + static_cast<std::size_t>(a) * depth;
            for (int b = 0; b <= a; ++b) {
                const double* cb = j_union.data() + static_cast<std::size_t>(b) * depth;
                double s = 0.0;
                for (int d = 0; d < depth; ++d) s += ca[d] * cb[d];
                k.at(a, b) = s / depth;
            }
        }
        std::vector<double> r0(n_train);
        for (int a = 0; a < n_train; ++a) r0[a] = z0_union[a] - y_train[a];
        LadderSolve w = spd_solve_ladder(k, r0, 0.0);
        out.ridge_used = w.ridge_used;
        for (int b = 0; b < n_test; ++b) {
            const double* cb = j_union.data() + static_cast<std::size_t>(n_train + b) * depth;
            double corr = 0.0;
            for (int a = 0; a < n_train; ++a) {
                const double* ca = j_union.data() + static_cast<std::size_t>(a) * depth;
                double ktilde = 0.0;
                for (int d = 0; d < depth; ++d) ktilde += cb[d] * ca[d];
                corr += (ktilde / depth) * w.x[a];
            }
            out.z_test_inf[b] -= corr;
        }
    }
    std::vector<double> r(n_test);
    for (int b = 0; b < n_test; ++b) r[b] = out.z_test_inf[b] - y_test[b];
    out.loss_test_inf = mse_loss(r);
    return out;
}

QnnCurseSummary curse_experiment_qnn(const QnnCurseConfig& config) {
    QnnCurseSummary summary;
    const int trials = config.trials;
    summary.rows.resize(trials);
    const int dim = 1 << config.n;

    parallel_for(static_cast<std::size_t>(trials), [&](std::size_t t) {
        Rng trial_rng = substream(config.seed, {0x636e6e, t});
        LocalZObservable obs = sample_coeffs(config.n, config.obs_variance, trial_rng);
        CMat target = haar_unitary(dim, trial_rng);

        Provenance ptrain{.generator = "haar", .seed = mix(config.seed, 4 * t + 11),
                          .n_qubits = config.n, .count = config.size_train, .split = "train"};
        Provenance ptest{.generator = "haar", .seed = mix(config.seed, 4 * t + 13),
                         .n_qubits = config.n, .count = config.size_test, .split = "test"};
        Dataset train = generate_dataset(ptrain);
        Dataset test = generate_dataset(ptest);
        train.labels = label_with_target(train.states, target, obs);
        test.labels = label_with_target(test.states, target, obs);

        WindowAssignment wins =
            make_windows(config.n, config.window_size, Connectivity::OneDCyclic, trial_rng);
        Ansatz ansatz =
            sample_ansatz(config.n, config.window_size, config.depth, wins, HamiltonianFamily::XYZ, trial_rng);

        std::vector<StateVector> all;
        all.reserve(train.size() + test.size());
        for (const auto& s : train.states) all.push_back(s);
        for (const auto& s : test.states) all.push_back(s);
        std::vector<double> theta0(ansatz.depth(), 0.0);
        JacobianResult jac = jacobian(ansatz, theta0, all, obs);

        FrozenPrediction pred =
            frozen_kernel_predict(jac.j, jac.depth, static_cast<int>(train.size()),
                                  static_cast<int>(test.size()), jac.z, train.labels, test.labels);

        std::vector<double> r0(test.size());
        for (std::size_t b = 0; b < test.size(); ++b) {
            r0[b] = jac.z[train.size() + b] - test.labels[b];
        }
        summary.rows[t] = {static_cast<int>(t), mse_loss(r0), pred.loss_test_inf};
    });

    std::vector<double> lb0(trials), lbinf(trials);
    for (int t = 0; t < trials; ++t) {
        lb0[t] = summary.rows[t].loss_test_0;
        lbinf[t] = summary.rows[t].loss_test_inf;
    }
    summary.mean_loss_test_0 = mean(lb0);
    summary.mean_loss_test_inf = mean(lbinf);
    summary.bound_factor = 1.0 - static_cast<double>(config.size_train) /
                                     (std::pow(4.0, config.n) - 1.0);
    summary.bound_margin = summary.mean_loss_test_inf - summary.bound_factor * summary.mean_loss_test_0;

    auto loo_mean = [](std::span<const double> v, long skip) {
        double s = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (static_cast<long>(i) != skip) s += v[i];
        }
        return s / static_cast<double>(skip < 0 ? v.size() : v.size() - 1);
    };
    summary.bound_margin_se = jackknife_se(static_cast<std::size_t>(trials), [&](long skip) {
        return loo_mean(lbinf, skip) - summary.bound_factor * loo_mean(lb0, skip);
    });
    summary.bound_holds_2se = summary.bound_margin >= -2.0 * summary.bound_margin_se;
    return summary;
}

}  // namespace qml
