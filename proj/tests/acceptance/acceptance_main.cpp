// Acceptance suite: one pass/fail line per criterion, exit code equals the
// number of failures. Each criterion pins its tolerances in code; seeds are
// fixed so every run is deterministic.
//
// Usage: qml_acceptance [--only N] [--threads T]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "qml/analysis.hpp"
#include "qml/datasets.hpp"
#include "qml/experiments.hpp"
#include "qml/kernel.hpp"
#include "qml/parallel.hpp"
#include "qml/qnn.hpp"
#include "qml/stats.hpp"

using namespace qml;

namespace {

struct Criterion {
    int id;
    const char* name;
    std::function<bool(std::string&)> run;
};

// ---------------------------------------------------------------- dense oracle

std::vector<std::complex<double>> dense_pauli_matrix(const PauliString& p) {
    auto single = [](int code) {
        std::vector<std::complex<double>> m(4, 0.0);
        switch (code) {
            case 0: m[0] = 1.0; m[3] = 1.0; break;
            case 1: m[1] = 1.0; m[2] = 1.0; break;
            case 2: m[1] = {0.0, -1.0}; m[2] = {0.0, 1.0}; break;
            default: m[0] = 1.0; m[3] = -1.0; break;
        }
        return m;
    };
    std::vector<std::complex<double>> acc = single(p.code(0));
    int dim = 2;
    for (uint32_t q = 1; q < p.size(); ++q) {
        auto next = single(p.code(q));
        std::vector<std::complex<double>> out(static_cast<std::size_t>(dim * 2) * (dim * 2), 0.0);
        for (int i = 0; i < dim; ++i) {
            for (int j = 0; j < dim; ++j) {
                for (int a = 0; a < 2; ++a) {
                    for (int b = 0; b < 2; ++b) {
                        out[static_cast<std::size_t>(i * 2 + a) * (dim * 2) + (j * 2 + b)] =
                            acc[static_cast<std::size_t>(i) * dim + j] * next[a * 2 + b];
                    }
                }
            }
        }
        acc = std::move(out);
        dim *= 2;
    }
    return acc;
}

// ------------------------------------------------------------------ criterion 1

bool criterion_pauli_oracle(std::string& detail) {
    int checked = 0;
    for (uint64_t a = 0; a < 16; ++a) {
        for (uint64_t b = 0; b < 16; ++b) {
            PauliString p(2, a), q(2, b);
            auto lhs = dense_pauli_matrix(p);
            auto rhs = dense_pauli_matrix(q);
            std::vector<std::complex<double>> prod(16, 0.0);
            for (int i = 0; i < 4; ++i) {
                for (int k = 0; k < 4; ++k) {
                    for (int j = 0; j < 4; ++j) prod[i * 4 + j] += lhs[i * 4 + k] * rhs[k * 4 + j];
                }
            }
            PhasedPauli pp = pauli_product(p, q);
            auto word = dense_pauli_matrix(pp.word);
            std::complex<double> phase = phase_value(pp.phase);
            for (int e = 0; e < 16; ++e) {
                if (prod[e] != phase * word[e]) {
                    detail = "mismatch at pair (" + p.text() + ", " + q.text() + ")";
                    return false;
                }
            }
            ++checked;
        }
    }
    detail = std::to_string(checked) + " pairs exact";
    return checked == 256;
}

// ------------------------------------------------------------------ criterion 2

Ansatz mixed_window_ansatz(uint32_t n, int depth, Rng& rng) {
    Ansatz a;
    a.n_qubits = n;
    a.window_size = 3;
    a.family = HamiltonianFamily::XYZ;
    for (int d = 0; d < depth; ++d) {
        int s = 1 + static_cast<int>(uniform_index(rng, 3));
        WindowAssignment w = make_windows(n, s, Connectivity::AllToAll, rng, 1);
        Gate g;
        g.window = w.windows[0];
        PauliString p = PauliString::identity(n);
        for (int q : g.window) {
            p = p.with(static_cast<uint32_t>(q), 1 + static_cast<int>(uniform_index(rng, 3)));
        }
        g.generator = p;
        a.gates.push_back(std::move(g));
    }
    return a;
}

bool criterion_jacobian(std::string& detail) {
    const uint32_t n = 6;
    const int depth = 24;
    const double h = 1e-5;
    double worst = 0.0;
    for (uint64_t inst = 0; inst < 20; ++inst) {
        Rng rng = substream(2002, {inst});
        Ansatz a = mixed_window_ansatz(n, depth, rng);
        LocalZObservable obs = sample_coeffs(n, 1.0, rng);
        std::vector<double> theta(depth);
        for (auto& t : theta) t = uniform(rng, -M_PI, M_PI);
        Provenance prov{.generator = "haar", .seed = mix(2002, inst), .n_qubits = n, .count = 2,
                        .split = "train"};
        Dataset data = generate_dataset(prov);

        JacobianResult jac = jacobian(a, theta, data.states, obs);
        for (int d = 0; d < depth; ++d) {
            for (std::size_t s = 0; s < data.size(); ++s) {
                std::vector<double> tp = theta, tm = theta;
                tp[d] += h;
                tm[d] -= h;
                double fd = (forward(a, tp, data.states[s], obs) -
                             forward(a, tm, data.states[s], obs)) /
                            (2.0 * h);
                worst = std::max(worst, std::abs(fd - jac.j[s * depth + d]));
            }
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "max |analytic - central difference| = %.3e", worst);
    detail = buf;
    return worst <= 1e-6;
}

// ------------------------------------------------------------------ criterion 3

bool criterion_moments(std::string& detail) {
    const uint32_t n = 6;
    const int draws = 2000;
    const int n_strings = 20;
    const double haar_var = 1.0 / 65.0;

    Rng pick = substream(3020, {0});
    std::vector<PauliString> strings;
    while (static_cast<int>(strings.size()) < n_strings) {
        uint64_t code = 1 + uniform_index(pick, (uint64_t{1} << (2 * n)) - 1);
        strings.emplace_back(n, code);
    }

    std::vector<std::vector<double>> coeffs(n_strings, std::vector<double>(draws));
    parallel_for(draws, [&](std::size_t i) {
        Rng rng = substream(3020, {1, i});
        StateVector s = haar_state(n, rng);
        for (int k = 0; k < n_strings; ++k) coeffs[k][i] = pauli_coefficient(s, strings[k]);
    });

    double worst_mean_sigma = 0.0, worst_var_rel = 0.0;
    for (int k = 0; k < n_strings; ++k) {
        double m = mean(coeffs[k]);
        double se = sample_sd(coeffs[k]) / std::sqrt(static_cast<double>(draws));
        worst_mean_sigma = std::max(worst_mean_sigma, std::abs(m) / se);
        double var = 0.0;
        for (double c : coeffs[k]) var += c * c;
        var /= draws;
        worst_var_rel = std::max(worst_var_rel, std::abs(var - haar_var) / haar_var);
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "worst mean dev %.2f sigma, worst variance dev %.1f%% of 1/65",
                  worst_mean_sigma, 100.0 * worst_var_rel);
    detail = buf;
    return worst_mean_sigma <= 5.0 && worst_var_rel <= 0.05;
}

// ------------------------------------------------------------------ criterion 4

bool criterion_qkm_curse(std::string& detail) {
    QkmCurseConfig cfg;
    cfg.n = 10;
    cfg.size_train = 16;
    cfg.size_test = 16;
    cfg.trials = 50;
    cfg.seed = 4004;
    QkmCurseSummary s = curse_experiment_qkm(cfg);
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "relative improvement %.4f (<= 0.1), bound margin %.3e (>= -2 x %.3e)",
                  s.relative_improvement, s.bound_margin, s.bound_margin_se);
    detail = buf;
    return s.relative_improvement <= 0.1 && s.bound_holds_2se;
}

// ------------------------------------------------------------------ criterion 5

bool criterion_qnn_curse(std::string& detail) {
    QnnCurseConfig cfg;
    cfg.n = 6;
    cfg.size_train = 10;
    cfg.size_test = 10;
    cfg.trials = 50;
    cfg.window_size = 2;
    cfg.depth = 120;
    cfg.seed = 5005;
    QnnCurseSummary s = curse_experiment_qnn(cfg);
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "E L_B(inf) = %.5f vs factor x E L_B(0) = %.5f (margin %.3e >= -2 x %.3e)",
                  s.mean_loss_test_inf, s.bound_factor * s.mean_loss_test_0, s.bound_margin,
                  s.bound_margin_se);
    detail = buf;
    return s.bound_holds_2se;
}

// ------------------------------------------------------------------ criterion 6

bool criterion_haar_spectrum_scaling(std::string& detail) {
    const int size_a = 12;
    const int depth = 200;
    const int s = 2;
    const int trials = 12;
    std::vector<double> mean_lmax, mean_ratio_to_leading;
    for (uint32_t n : {4u, 6u, 8u}) {
        std::vector<double> lmaxes(trials), ratios(trials);
        parallel_for(trials, [&](std::size_t t) {
            Rng rng = substream(6006, {n, t});
            LocalZObservable obs = sample_coeffs(n, 1.0, rng);
            Provenance prov{.generator = "haar", .seed = mix(6006, n * 1000 + t), .n_qubits = n,
                            .count = size_a, .split = "train"};
            Dataset data = generate_dataset(prov);
            WindowAssignment wins = make_windows(n, s, Connectivity::OneDCyclic, rng);
            Ansatz ansatz = sample_ansatz(n, s, depth, wins, HamiltonianFamily::XYZ, rng);
            std::vector<double> theta0(depth, 0.0);
            SymMatrix k = qntk(jacobian(ansatz, theta0, data.states, obs));
            auto evals = sym_eigvals_dense(k.to_dense(), k.order());
            lmaxes[t] = evals.back();
            ratios[t] = evals.back() / (obs.frob_norm_sq() / std::pow(4.0, n));
        });
        mean_lmax.push_back(mean(lmaxes));
        mean_ratio_to_leading.push_back(mean(ratios));
    }
    double r46 = mean_lmax[0] / mean_lmax[1];
    double r68 = mean_lmax[1] / mean_lmax[2];
    double ratio8 = mean_ratio_to_leading[2];
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "lmax ratios per qubit pair: %.2f, %.2f (in [2.5, 6]); lmax/leading at N=8: %.2f (<= 2)",
                  r46, r68, ratio8);
    detail = buf;
    return r46 >= 2.5 && r46 <= 6.0 && r68 >= 2.5 && r68 <= 6.0 && ratio8 <= 2.0;
}

// ------------------------------------------------------------------ criterion 7

bool criterion_embedding_bracket(std::string& detail) {
    const uint32_t n = 8;
    const int s = 3;
    const int size_a = 16;
    const int depth = 2000;
    const int trials = 25;
    std::vector<int> ok(trials, 0);
    parallel_for(trials, [&](std::size_t t) {
        Rng rng = substream(7007, {t});
        LocalZObservable obs = sample_coeffs(n, 1.0, rng);
        Provenance prov{.generator = "embed-uniform", .seed = mix(7007, t), .n_qubits = n,
                        .count = size_a, .split = "train"};
        Dataset data = generate_dataset(prov);
        WindowAssignment wins = make_windows(n, s, Connectivity::OneDCyclic, rng);
        Ansatz ansatz = sample_ansatz(n, s, depth, wins, HamiltonianFamily::XY, rng);
        std::vector<double> theta0(depth, 0.0);
        SymMatrix k0 = qntk(jacobian(ansatz, theta0, data.states, obs));
        auto evals = sym_eigvals_dense(k0.to_dense(), k0.order());
        double lower = delta_s(obs, s) / std::ldexp(1.0, s + 1);  // Delta_S / 2^{S+1}
        double norm_sq = obs.spectral_norm() * obs.spectral_norm();
        double upper = 1.5 * norm_sq / std::ldexp(1.0, s);
        ok[t] = (evals.front() >= lower && evals.back() <= upper) ? 1 : 0;
    });
    int passes = 0;
    for (int v : ok) passes += v;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "bracket held in %d / %d trials (need >= 20)", passes, trials);
    detail = buf;
    return passes >= 20;
}

// --------------------------------------------------- criteria 8-10 shared setup

struct QdlTask {
    Dataset train, test;
    LocalZObservable obs;
    WindowAssignment windows;

    QdlTask(uint32_t n, int l, uint64_t seed, const CMat& target)
        : obs(sample_coeffs_for(n, seed)), windows() {
        Provenance ptrain{.generator = "fldc", .seed = mix(seed, 1), .n_qubits = n, .count = 14,
                          .fldc_blocks = l, .split = "train"};
        Provenance ptest{.generator = "fldc", .seed = mix(seed, 2), .n_qubits = n, .count = 14,
                         .fldc_blocks = l, .split = "test"};
        train = generate_dataset(ptrain);
        test = generate_dataset(ptest);
        train.labels = label_with_target(train.states, target, obs);
        test.labels = label_with_target(test.states, target, obs);
    }

    static LocalZObservable sample_coeffs_for(uint32_t n, uint64_t seed) {
        Rng rng = substream(seed, {0});
        return sample_coeffs(n, 1.0, rng);
    }
};

TrainingTrace train_qdl(const QdlTask& task, int s, int depth, uint64_t seed, int steps) {
    const uint32_t n = task.train.states[0].n_qubits();
    Rng rng = substream(seed, {3, static_cast<uint64_t>(s), static_cast<uint64_t>(depth)});
    WindowAssignment wins = make_windows(n, s, Connectivity::OneDCyclic, rng);
    Ansatz ansatz = sample_ansatz(n, s, depth, wins, HamiltonianFamily::XYZ, rng);
    TrainConfig tc;
    tc.eta = static_cast<double>(n) / depth;
    tc.steps = steps;
    tc.record_every = 10;
    tc.seed = mix(seed, 4);
    return train_gd(ansatz, task.train, &task.test, task.obs, tc);
}

// ------------------------------------------------------------------ criterion 8

bool criterion_linear_convergence(std::string& detail) {
    const uint32_t n = 8;
    const CMat target = heisenberg_unitary(n, 1.0);
    QdlTask task(n, 1, 8008, target);

    TrainingTrace main_run = train_qdl(task, 3, 160, 8008, 200);
    double rel = main_run.loss_history.back() / main_run.loss_history.front();

    std::vector<double> steps, logloss;
    for (int t = 10; t <= 100; ++t) {
        steps.push_back(t);
        logloss.push_back(std::log(main_run.loss_history[t]));
    }
    LineFit fit = fit_line(steps, logloss);

    TrainingTrace control = train_qdl(task, 1, 160, 8008, 200);
    double rel_control = control.loss_history.back() / control.loss_history.front();

    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "S=3: final relative loss %.2e (<= 1e-2), log-loss fit R^2 %.3f (>= 0.9); "
                  "S=1 control %.2e (>= 1e-1)",
                  rel, fit.r2, rel_control);
    detail = buf;
    return rel <= 1e-2 && fit.r2 >= 0.9 && rel_control >= 1e-1;
}

// ------------------------------------------------------------------ criterion 9

bool criterion_structure_separation(std::string& detail) {
    const uint32_t n = 8;
    const CMat target = heisenberg_unitary(n, 1.0);

    QdlTask task0(n, 0, 9009, target);
    QdlTask task8(n, 8, 9009, target);
    TrainingTrace run0 = train_qdl(task0, 3, 160, 9009, 200);
    TrainingTrace run8 = train_qdl(task8, 3, 160, 9009, 200);

    double lmin0 = run0.rows.front().lmin_k;
    double lmin8 = run8.rows.front().lmin_k;
    double impr0 =
        (run0.rows.front().loss_test - run0.rows.back().loss_test) / run0.rows.front().loss_test;
    double impr8 =
        (run8.rows.front().loss_test - run8.rows.back().loss_test) / run8.rows.front().loss_test;

    char buf[192];
    std::snprintf(buf, sizeof(buf),
                  "lmin[K(0)]: L=0 %.3e vs L=8 %.3e (ratio %.1f >= 3); "
                  "test improvement: L=0 %.3f > L=8 %.3f",
                  lmin0, lmin8, lmin0 / lmin8, impr0, impr8);
    detail = buf;
    return lmin0 >= 3.0 * lmin8 && impr0 > impr8;
}

// ----------------------------------------------------------------- criterion 10

bool criterion_lazy_training(std::string& detail) {
    const uint32_t n = 8;
    const CMat target = heisenberg_unitary(n, 1.0);
    QdlTask task(n, 1, 1010, target);

    std::vector<double> logd, logt;
    for (int depth : {60, 120, 240, 480}) {
        TrainingTrace run = train_qdl(task, 4, depth, 1010, 200);
        logd.push_back(std::log(static_cast<double>(depth)));
        logt.push_back(std::log(run.rows.back().theta_dist));
    }
    LineFit fit = fit_line(logd, logt);
    char buf[96];
    std::snprintf(buf, sizeof(buf), "log-log slope of |theta(T)-theta(0)| vs D: %.3f (in [-0.8, -0.2])",
                  fit.slope);
    detail = buf;
    return fit.slope >= -0.8 && fit.slope <= -0.2;
}

// ----------------------------------------------------------------- criterion 11

bool criterion_generalization_identity(std::string& detail) {
    double worst = 0.0;
    for (uint64_t inst = 0; inst < 10; ++inst) {
        Rng rng = substream(1111, {inst});
        std::vector<StateVector> train, test;
        for (int i = 0; i < 5; ++i) train.push_back(haar_state(4, rng));
        for (int i = 0; i < 3; ++i) test.push_back(haar_state(4, rng));
        std::vector<double> r0_train(5), r0_test(3);
        for (auto& v : r0_train) v = normal(rng);
        for (auto& v : r0_test) v = normal(rng);

        SymMatrix k = gram_matrix(train);
        std::vector<double> k_cross = gram_cross(test, train);
        GenErrorResult ge = relative_generalization_error(k, k_cross, 3, r0_train, r0_test);
        auto r_inf = test_residuals_final(k_cross, 3, k, r0_train, r0_test);
        double direct = mse_loss(r_inf) - mse_loss(r0_test);
        worst = std::max(worst, std::abs(ge.value - direct));
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "max |two-term expansion - direct| = %.3e (<= 1e-10)", worst);
    detail = buf;
    return worst <= 1e-10;
}

// ----------------------------------------------------------------- criterion 12

std::string slurp_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool criterion_determinism(std::string& detail) {
    namespace fs = std::filesystem;
    struct Job {
        const char* kind;
        nlohmann::json params;
    };
    const std::vector<Job> jobs = {
        {"qdl", {{"seed", 12}, {"n", 4}, {"train_size", 6}, {"test_size", 6}, {"T", 6},
                 {"record_every", 2}, {"D", 16}, {"S", 2}, {"L", 1}}},
        {"wine", {{"seed", 12}, {"per_split", 8}, {"S", 1}, {"D", 13}, {"T", 3},
                  {"record_every", 1}}},
        {"curse-qkm", {{"seed", 12}, {"n", 5}, {"size_A", 4}, {"size_B", 4}, {"trials", 4}}},
        {"curse-qnn", {{"seed", 12}, {"n", 4}, {"size_A", 3}, {"size_B", 3}, {"trials", 4},
                       {"S", 2}, {"D", 20}}},
        {"coeff-stats", {{"seed", 12}, {"n", 4}, {"S", {1}}, {"L", {0}}, {"sizes", {10}},
                         {"alpha_samples", 20}}},
        {"spectrum", {{"seed", 12}, {"mode", "haar"}, {"n", {3, 4}}, {"size_A", 4},
                      {"D", 24}, {"trials", 2}}},
        {"moment-check", {{"seed", 12}, {"n", 3}, {"trials", 300}}},
    };

    int compared = 0;
    for (const Job& job : jobs) {
        std::string dir_a = std::string("/tmp/qml_acc12_a_") + job.kind;
        std::string dir_b = std::string("/tmp/qml_acc12_b_") + job.kind;
        fs::remove_all(dir_a);
        fs::remove_all(dir_b);
        ExperimentConfig cfg;
        cfg.kind = job.kind;
        cfg.params = job.params;
        cfg.out_dir = dir_a;
        set_thread_count(1);
        run_experiment(cfg);
        cfg.out_dir = dir_b;
        set_thread_count(4);
        run_experiment(cfg);
        set_thread_count(0);

        for (const auto& entry : fs::directory_iterator(dir_a)) {
            if (entry.path().extension() != ".csv") continue;
            std::string other = (fs::path(dir_b) / entry.path().filename()).string();
            if (!fs::exists(other) || slurp_file(entry.path()) != slurp_file(other)) {
                detail = std::string(job.kind) + ": " + entry.path().filename().string() +
                         " differs across thread counts";
                return false;
            }
            ++compared;
        }
    }
    detail = "all " + std::to_string(compared) + " CSVs byte-identical at 1 vs 4 threads";
    return compared > 0;
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
        if (std::strcmp(argv[i], "--threads") == 0 && i + 1 < argc) {
            set_thread_count(std::atoi(argv[++i]));
        }
    }

    const std::vector<Criterion> criteria = {
        {1, "Pauli product vs dense Kronecker oracle (256 pairs, exact)", criterion_pauli_oracle},
        {2, "analytic Jacobian vs central finite differences (20 instances)", criterion_jacobian},
        {3, "Haar 2-design moments (N=6, 2000 states, 20 strings)", criterion_moments},
        {4, "kernel-method generalization curse (N=10, 50 trials)", criterion_qkm_curse},
        {5, "frozen-kernel QNN generalization curse (N=6, 50 trials)", criterion_qnn_curse},
        {6, "QNTK lambda_max scaling with qubit count (N=4,6,8)", criterion_haar_spectrum_scaling},
        {7, "qubit-embedding spectrum bracket (25 trials)", criterion_embedding_bracket},
        {8, "linear convergence of QDL training (S=3 vs S=1)", criterion_linear_convergence},
        {9, "structured vs deep-random data separation (L=0 vs L=8)", criterion_structure_separation},
        {10, "lazy training: parameter distance scaling with depth", criterion_lazy_training},
        {11, "generalization-error two-term identity (1e-10)", criterion_generalization_identity},
        {12, "byte-identical reruns at any thread count", criterion_determinism},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        if (only != 0 && c.id != only) continue;
        auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] criterion %2d: %s — %s (%.1f s)\n", ok ? "PASS" : "FAIL", c.id, c.name,
                    detail.c_str(), secs);
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    return failures;
}
