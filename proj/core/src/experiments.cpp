#include "qml/experiments.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>

#include "qml/analysis.hpp"
#include "qml/datasets.hpp"
#include "qml/io.hpp"
#include "qml/kernel.hpp"
#include "qml/qnn.hpp"
#include "qml/stats.hpp"

namespace qml {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Substream salts, one per role.
enum : uint64_t {
    kSaltObs = 0x6f6273,
    kSaltData = 0x64617461,
    kSaltAnsatz = 0x616e7a,
    kSaltNoise = 0x6e6f69,
    kSaltWine = 0x77696e65,
};

}  // namespace

uint64_t ExperimentConfig::seed() const {
    if (!params.contains("seed")) throw std::invalid_argument("config: seed is mandatory");
    return params.at("seed").get<uint64_t>();
}

double ExperimentConfig::num(const std::string& key, double fallback) const {
    return params.contains(key) ? params.at(key).get<double>() : fallback;
}

int ExperimentConfig::integer(const std::string& key, int fallback) const {
    return params.contains(key) ? params.at(key).get<int>() : fallback;
}

std::string ExperimentConfig::str(const std::string& key, const std::string& fallback) const {
    return params.contains(key) ? params.at(key).get<std::string>() : fallback;
}

std::vector<int> ExperimentConfig::int_list(const std::string& key, std::vector<int> fallback) const {
    if (!params.contains(key)) return fallback;
    const json& v = params.at(key);
    if (v.is_number()) return {v.get<int>()};
    return v.get<std::vector<int>>();
}

void ExperimentConfig::set_override(const std::string& assignment) {
    auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw std::invalid_argument("override must be KEY=VALUE: " + assignment);
    }
    std::string key = assignment.substr(0, eq);
    std::string value = assignment.substr(eq + 1);
    json parsed = json::parse(value, nullptr, false);
    if (parsed.is_discarded()) parsed = value;  // plain string
    params[key] = parsed;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    json j = json::parse(in);
    if (j.contains("config")) j = j.at("config");  // accept a manifest
    ExperimentConfig cfg;
    if (j.contains("kind")) cfg.kind = j.at("kind").get<std::string>();
    if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
    if (j.contains("paper_scale")) cfg.paper_scale = j.at("paper_scale").get<bool>();
    json params = j.contains("params") ? j.at("params") : j;
    for (auto& [k, v] : params.items()) {
        if (k == "kind" || k == "out_dir" || k == "paper_scale" || k == "params") continue;
        cfg.params[k] = v;
    }
    return cfg;
}

namespace {

json config_echo(const ExperimentConfig& cfg) {
    return json{{"kind", cfg.kind},
                {"out_dir", cfg.out_dir},
                {"paper_scale", cfg.paper_scale},
                {"params", cfg.params}};
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
    if (!out) throw std::runtime_error("write failure: " + path);
}

void write_trace_csv(const std::string& path, const TrainingTrace& trace) {
    CsvWriter csv(path, {"step", "loss_train", "loss_test", "test_error", "grad_norm", "lmin_K",
                         "lmax_K", "theta_dist", "smooth_C0"});
    for (const TraceRow& r : trace.rows) {
        csv.row({std::to_string(r.step), fmt_g(r.loss_train), fmt_g(r.loss_test),
                 fmt_g(r.test_error), fmt_g(r.grad_norm), fmt_g(r.lmin_k), fmt_g(r.lmax_k),
                 fmt_g(r.theta_dist), fmt_g(r.smooth_c0)});
    }
}

struct TraceSummaryRow {
    int s, l, d, repeat;
    double eta;
    TrainingTrace trace;
};

void write_run_summary_csv(const std::string& path, const std::vector<TraceSummaryRow>& runs,
                           bool with_l) {
    std::vector<std::string> header = {"S", "D", "repeat", "eta", "loss_train_0", "loss_train_T",
                                       "rel_train", "loss_test_0", "loss_test_T", "rel_test",
                                       "test_error_T", "lmin_K0", "theta_dist_T", "max_C0"};
    if (with_l) header.insert(header.begin() + 1, "L");
    CsvWriter csv(path, header);
    for (const auto& run : runs) {
        const TraceRow& first = run.trace.rows.front();
        const TraceRow& last = run.trace.rows.back();
        double max_c0 = 0.0;
        for (const TraceRow& r : run.trace.rows) max_c0 = std::max(max_c0, r.smooth_c0);
        std::vector<std::string> cells = {std::to_string(run.s)};
        if (with_l) cells.push_back(std::to_string(run.l));
        cells.insert(cells.end(),
                     {std::to_string(run.d), std::to_string(run.repeat), fmt_g(run.eta),
                      fmt_g(first.loss_train), fmt_g(last.loss_train),
                      fmt_g(last.loss_train / first.loss_train), fmt_g(first.loss_test),
                      fmt_g(last.loss_test),
                      fmt_g(first.loss_test > 0.0 ? last.loss_test / first.loss_test : 0.0),
                      fmt_g(last.test_error), fmt_g(first.lmin_k), fmt_g(last.theta_dist),
                      fmt_g(max_c0)});
        csv.row(cells);
    }
}

// Per-(S, L) slope of log ||theta(T)-theta(0)|| against log D, averaged over
// repeats; needs at least two distinct D values.
json sweep_fits(const std::vector<TraceSummaryRow>& runs, bool with_l) {
    json fits = json::array();
    std::map<std::pair<int, int>, std::map<int, std::vector<double>>> by_combo;
    for (const auto& run : runs) {
        by_combo[{run.s, with_l ? run.l : 0}][run.d].push_back(run.trace.rows.back().theta_dist);
    }
    for (const auto& [combo, dmap] : by_combo) {
        if (dmap.size() < 2) continue;
        std::vector<double> logd, logt;
        for (const auto& [d, dists] : dmap) {
            logd.push_back(std::log(static_cast<double>(d)));
            logt.push_back(std::log(mean(dists)));
        }
        LineFit f = fit_line(logd, logt);
        fits.push_back({{"S", combo.first},
                        {"L", combo.second},
                        {"slope", f.slope},
                        {"r2", f.r2}});
    }
    return fits;
}

json run_qdl_like(const ExperimentConfig& cfg, bool wine_task) {
    const uint64_t seed = cfg.seed();
    const int t_steps = cfg.integer("T", 200);
    const int record_every = cfg.integer("record_every", 10);
    std::optional<long> shots;
    if (cfg.has("shots") && !cfg.params.at("shots").is_null()) {
        shots = cfg.params.at("shots").get<long>();
    }

    std::vector<TraceSummaryRow> runs;
    json summary;

    if (!wine_task) {
        const uint32_t n = static_cast<uint32_t>(cfg.integer("n", cfg.paper_scale ? 12 : 8));
        const int train_size = cfg.integer("train_size", cfg.paper_scale ? 40 : 14);
        const int test_size = cfg.integer("test_size", cfg.paper_scale ? 40 : 14);
        const double t_evol = cfg.num("t", 1.0);
        const double obs_variance = cfg.num("obs_variance", 1.0);
        const int repeats = cfg.integer("repeats", cfg.paper_scale ? 5 : 1);
        std::vector<int> l_list = cfg.int_list("L", cfg.paper_scale ? std::vector<int>{0, 1, 2, 4, 8}
                                                                    : std::vector<int>{1});
        std::vector<int> s_list = cfg.int_list("S", cfg.paper_scale ? std::vector<int>{1, 2, 3, 4}
                                                                    : std::vector<int>{3});
        std::vector<int> d_list;
        if (cfg.has("D")) {
            d_list = cfg.int_list("D", {});
        } else {
            std::vector<int> layers = cfg.int_list("layers", cfg.paper_scale
                                                                 ? std::vector<int>{5, 7, 10, 14, 20}
                                                                 : std::vector<int>{20});
            for (int ly : layers) d_list.push_back(ly * static_cast<int>(n));
        }

        const CMat target = heisenberg_unitary(n, t_evol);
        Rng win_rng = substream(seed, {kSaltAnsatz, 0});

        for (int rep = 0; rep < repeats; ++rep) {
            Rng obs_rng = substream(seed, {kSaltObs, static_cast<uint64_t>(rep)});
            LocalZObservable obs = sample_coeffs(n, obs_variance, obs_rng);
            for (int l : l_list) {
                Provenance ptrain{.generator = "fldc",
                                  .seed = mix(seed, kSaltData + 4 * (uint64_t(l) * 1000 + rep)),
                                  .n_qubits = n, .count = train_size, .fldc_blocks = l,
                                  .split = "train"};
                Provenance ptest = ptrain;
                ptest.seed = mix(seed, kSaltData + 4 * (uint64_t(l) * 1000 + rep) + 1);
                ptest.count = test_size;
                ptest.split = "test";
                Dataset train = generate_dataset(ptrain);
                Dataset test = generate_dataset(ptest);
                train.labels = label_with_target(train.states, target, obs);
                test.labels = label_with_target(test.states, target, obs);

                for (int s : s_list) {
                    WindowAssignment wins = make_windows(n, s, Connectivity::OneDCyclic, win_rng);
                    for (int d : d_list) {
                        Rng ansatz_rng = substream(
                            seed, {kSaltAnsatz, static_cast<uint64_t>(s), static_cast<uint64_t>(d),
                                   static_cast<uint64_t>(l), static_cast<uint64_t>(rep)});
                        Ansatz ansatz =
                            sample_ansatz(n, s, d, wins, HamiltonianFamily::XYZ, ansatz_rng);
                        TrainConfig tc;
                        tc.eta = cfg.has("eta") ? std::optional<double>(cfg.num("eta", 0.0))
                                                : std::optional<double>(
                                                      cfg.num("eta_scale", 1.0) * n / d);
                        tc.steps = t_steps;
                        tc.record_every = record_every;
                        tc.shots = shots;
                        tc.seed = mix(seed, kSaltNoise + uint64_t(s) * 7 + uint64_t(d) * 13 +
                                                uint64_t(l) * 31 + uint64_t(rep));
                        TrainingTrace trace = train_gd(ansatz, train, &test, obs, tc);

                        char name[96];
                        std::snprintf(name, sizeof(name), "trace_S%d_L%d_D%d_r%d.csv", s, l, d, rep);
                        write_trace_csv((fs::path(cfg.out_dir) / name).string(), trace);
                        runs.push_back({s, l, d, rep, trace.eta_used, std::move(trace)});
                    }
                }
            }
        }
        write_run_summary_csv((fs::path(cfg.out_dir) / "summary.csv").string(), runs, true);
        summary["sweep_fits"] = sweep_fits(runs, true);
    } else {
        const std::string wine_path = cfg.str("wine_path", "data/wine.csv");
        const int per_split = cfg.integer("per_split", 30);
        const int class_a = cfg.integer("class_a", 1);
        const int class_b = cfg.integer("class_b", 2);
        const int repeats = cfg.integer("repeats", cfg.paper_scale ? 5 : 1);
        std::vector<int> s_list = cfg.int_list("S", cfg.paper_scale ? std::vector<int>{1, 2, 3, 4}
                                                                    : std::vector<int>{2});
        std::vector<int> d_list = cfg.int_list("D", cfg.paper_scale
                                                        ? std::vector<int>{65, 91, 130, 182, 260}
                                                        : std::vector<int>{130});

        Rng wine_rng = substream(seed, {kSaltWine});
        WineSplits splits = load_wine(wine_path, {class_a, class_b}, per_split, wine_rng);
        const uint32_t n = splits.train.states[0].n_qubits();

        for (int rep = 0; rep < repeats; ++rep) {
            for (int s : s_list) {
                Rng obs_rng =
                    substream(seed, {kSaltObs, static_cast<uint64_t>(s), static_cast<uint64_t>(rep)});
                LocalZObservable obs =
                    sample_coeffs(n, cfg.has("obs_variance") ? cfg.num("obs_variance", 1.0)
                                                             : std::ldexp(1.0, s) / n,
                                  obs_rng);
                WindowAssignment wins{.n_qubits = n, .window_size = s,
                                      .connectivity = Connectivity::AllToAll};
                for (int d : d_list) {
                    Rng ansatz_rng = substream(seed, {kSaltAnsatz, static_cast<uint64_t>(s),
                                                      static_cast<uint64_t>(d),
                                                      static_cast<uint64_t>(rep)});
                    Ansatz ansatz = sample_ansatz(n, s, d, wins, HamiltonianFamily::XY, ansatz_rng);
                    TrainConfig tc;
                    tc.eta = cfg.has("eta")
                                 ? std::optional<double>(cfg.num("eta", 0.0))
                                 : std::optional<double>(cfg.num("eta_scale", 1.0) * n / d);
                    tc.steps = t_steps;
                    tc.record_every = record_every;
                    tc.shots = shots;
                    tc.seed = mix(seed, kSaltNoise + uint64_t(s) * 7 + uint64_t(d) * 13 +
                                            uint64_t(rep));
                    TrainingTrace trace = train_gd(ansatz, splits.train, &splits.test, obs, tc);

                    char name[96];
                    std::snprintf(name, sizeof(name), "trace_S%d_D%d_r%d.csv", s, d, rep);
                    write_trace_csv((fs::path(cfg.out_dir) / name).string(), trace);
                    runs.push_back({s, 0, d, rep, trace.eta_used, std::move(trace)});
                }
            }
        }
        write_run_summary_csv((fs::path(cfg.out_dir) / "summary.csv").string(), runs, false);
        summary["sweep_fits"] = sweep_fits(runs, false);
    }

    summary["runs"] = runs.size();
    return summary;
}

json run_curse_qkm_cfg(const ExperimentConfig& cfg) {
    QkmCurseConfig qc;
    qc.n = static_cast<uint32_t>(cfg.integer("n", 10));
    qc.size_train = cfg.integer("size_A", 16);
    qc.size_test = cfg.integer("size_B", 16);
    qc.trials = cfg.integer("trials", 50);
    qc.seed = cfg.seed();
    qc.heisenberg_t = cfg.num("t", 1.0);
    qc.obs_variance = cfg.num("obs_variance", 1.0);
    QkmCurseSummary s = curse_experiment_qkm(qc);

    CsvWriter csv((fs::path(cfg.out_dir) / "trials.csv").string(),
                  {"trial", "L_A0", "L_B0", "L_Binf", "bound"});
    for (const CurseTrialRow& r : s.rows) {
        csv.row({std::to_string(r.trial), fmt_g(r.loss_train_0), fmt_g(r.loss_test_0),
                 fmt_g(r.loss_test_inf), fmt_g(r.bound)});
    }
    return json{{"mean_loss_train_0", s.mean_loss_train_0},
                {"mean_loss_test_0", s.mean_loss_test_0},
                {"mean_loss_test_inf", s.mean_loss_test_inf},
                {"mean_sqrt_product", s.mean_sqrt_product},
                {"bound", s.bound},
                {"bound_margin", s.bound_margin},
                {"bound_margin_se", s.bound_margin_se},
                {"bound_holds_2se", s.bound_holds_2se},
                {"relative_improvement", s.relative_improvement},
                {"relative_improvement_se", s.relative_improvement_se},
                {"warnings", s.warnings}};
}

json run_curse_qnn_cfg(const ExperimentConfig& cfg) {
    QnnCurseConfig qc;
    qc.n = static_cast<uint32_t>(cfg.integer("n", 6));
    qc.size_train = cfg.integer("size_A", 10);
    qc.size_test = cfg.integer("size_B", 10);
    qc.trials = cfg.integer("trials", 50);
    qc.window_size = cfg.integer("S", 2);
    qc.depth = cfg.integer("D", 120);
    qc.seed = cfg.seed();
    qc.obs_variance = cfg.num("obs_variance", 1.0);
    QnnCurseSummary s = curse_experiment_qnn(qc);

    CsvWriter csv((fs::path(cfg.out_dir) / "trials.csv").string(),
                  {"trial", "L_B0", "L_Binf", "bound_factor"});
    for (const auto& r : s.rows) {
        csv.row({std::to_string(r.trial), fmt_g(r.loss_test_0), fmt_g(r.loss_test_inf),
                 fmt_g(s.bound_factor)});
    }
    return json{{"mean_loss_test_0", s.mean_loss_test_0},
                {"mean_loss_test_inf", s.mean_loss_test_inf},
                {"bound_factor", s.bound_factor},
                {"bound_margin", s.bound_margin},
                {"bound_margin_se", s.bound_margin_se},
                {"bound_holds_2se", s.bound_holds_2se}};
}

json run_coeff_stats_cfg(const ExperimentConfig& cfg) {
    const uint64_t seed = cfg.seed();
    const uint32_t n = static_cast<uint32_t>(cfg.integer("n", cfg.paper_scale ? 12 : 8));
    std::vector<int> s_list = cfg.int_list("S", cfg.paper_scale ? std::vector<int>{1, 2, 3, 4}
                                                                : std::vector<int>{1, 2});
    std::vector<int> l_list = cfg.int_list("L", cfg.paper_scale ? std::vector<int>{0, 1, 2, 4, 8}
                                                                : std::vector<int>{0, 1, 8});
    std::vector<int> sizes = cfg.int_list("sizes", cfg.paper_scale
                                                       ? std::vector<int>{10, 20, 50, 100, 200, 500, 1000}
                                                       : std::vector<int>{10, 100, 1000});
    const int alpha_samples = cfg.integer("alpha_samples", 1000);
    int max_needed = alpha_samples;
    for (int sz : sizes) max_needed = std::max(max_needed, sz);

    CsvWriter mean_csv((fs::path(cfg.out_dir) / "mean_stat.csv").string(),
                       {"S", "L", "size", "statistic", "spread_sd"});
    CsvWriter alpha_csv((fs::path(cfg.out_dir) / "alpha.csv").string(),
                        {"S", "L", "N", "alpha_mean", "alpha_sd", "haar_ref"});

    Rng win_rng = substream(seed, {kSaltAnsatz});
    for (int l : l_list) {
        std::vector<StateVector> states;
        states.reserve(max_needed);
        for (int i = 0; i < max_needed; ++i) {
            Rng rng = substream(seed, {kSaltData, static_cast<uint64_t>(l), static_cast<uint64_t>(i)});
            states.push_back(fldc_state(n, l, rng));
        }
        for (int s : s_list) {
            WindowAssignment wins = make_windows(n, s, Connectivity::OneDCyclic, win_rng);
            {
                CoeffStats st = coeff_matrix(std::span(states.data(), alpha_samples), wins,
                                             HamiltonianFamily::XYZ);
                std::vector<double> alphas;
                for (const CoeffRow& r : st.rows) {
                    if (r.weight == s) alphas.push_back(r.alpha_hat);
                }
                alpha_csv.row({std::to_string(s), std::to_string(l), std::to_string(n),
                               fmt_g(mean(alphas)),
                               fmt_g(alphas.size() > 1 ? sample_sd(alphas) : 0.0),
                               fmt_g(st.haar_ref)});
            }
            for (int sz : sizes) {
                CoeffStats st =
                    coeff_matrix(std::span(states.data(), sz), wins, HamiltonianFamily::XYZ);
                MeanStat ms = mean_statistic(st);
                std::vector<double> per;
                for (std::size_t r = 0; r < st.rows.size(); ++r) {
                    if (!st.rows[r].constant && st.rows[r].weight == s) per.push_back(ms.per_row[r]);
                }
                mean_csv.row({std::to_string(s), std::to_string(l), std::to_string(sz),
                              fmt_g(ms.weight_s_mean),
                              fmt_g(per.size() > 1 ? sample_sd(per) : 0.0)});
            }
        }
    }
    return json{{"rows_mean_stat", s_list.size() * l_list.size() * sizes.size()},
                {"rows_alpha", s_list.size() * l_list.size()}};
}

json run_spectrum_cfg(const ExperimentConfig& cfg) {
    const uint64_t seed = cfg.seed();
    const std::string mode = cfg.str("mode", "haar");
    const double delta = cfg.num("delta", 0.2);
    json summary;

    if (mode == "haar") {
        std::vector<int> n_list = cfg.int_list("n", {4, 6, 8});
        const int size_a = cfg.integer("size_A", 12);
        const int depth = cfg.integer("D", 200);
        const int s = cfg.integer("S", 2);
        const int trials = cfg.integer("trials", 10);
        const double obs_variance = cfg.num("obs_variance", 1.0);

        CsvWriter csv((fs::path(cfg.out_dir) / "spectrum.csv").string(),
                      {"n", "trial", "lmin_K", "lmax_K", "leading", "upper", "fitted_C", "pass"});
        json per_n = json::array();
        for (int n : n_list) {
            std::vector<double> lmaxes(trials);
            for (int t = 0; t < trials; ++t) {
                Rng rng = substream(seed, {static_cast<uint64_t>(n), static_cast<uint64_t>(t)});
                LocalZObservable obs = sample_coeffs(static_cast<uint32_t>(n), obs_variance, rng);
                Provenance prov{.generator = "haar",
                                .seed = mix(seed, uint64_t(n) * 97 + uint64_t(t)),
                                .n_qubits = static_cast<uint32_t>(n), .count = size_a,
                                .split = "train"};
                Dataset data = generate_dataset(prov);
                WindowAssignment wins =
                    make_windows(static_cast<uint32_t>(n), s, Connectivity::OneDCyclic, rng);
                Ansatz ansatz = sample_ansatz(static_cast<uint32_t>(n), s, depth, wins,
                                              HamiltonianFamily::XYZ, rng);
                std::vector<double> theta0(depth, 0.0);
                JacobianResult jac = jacobian(ansatz, theta0, data.states, obs);
                BoundReport rep = spectrum_bound_haar(qntk(jac), obs, static_cast<uint32_t>(n),
                                                          size_a, delta);
                lmaxes[t] = rep.empirical_max;
                csv.row({std::to_string(n), std::to_string(t), fmt_g(rep.empirical_min),
                         fmt_g(rep.empirical_max), fmt_g(rep.leading), fmt_g(rep.upper),
                         fmt_g(rep.fitted_slack), rep.pass ? "1" : "0"});
            }
            per_n.push_back({{"n", n}, {"mean_lmax", mean(lmaxes)}});
        }
        summary["per_n"] = per_n;
        json ratios = json::array();
        for (std::size_t i = 0; i + 1 < per_n.size(); ++i) {
            ratios.push_back(per_n[i].at("mean_lmax").get<double>() /
                             per_n[i + 1].at("mean_lmax").get<double>());
        }
        summary["lmax_ratios"] = ratios;
    } else if (mode == "bracket") {
        const uint32_t n = static_cast<uint32_t>(cfg.integer("n", 8));
        const int size_a = cfg.integer("size_A", 16);
        const int depth = cfg.integer("D", 2000);
        const int s = cfg.integer("S", 3);
        const int trials = cfg.integer("trials", 25);
        const double k = cfg.num("k", 0.5);
        const std::string family_name = cfg.str("family", "xy");
        const HamiltonianFamily family =
            family_name == "xyz" ? HamiltonianFamily::XYZ : HamiltonianFamily::XY;
        const std::string generator = cfg.str("data", family == HamiltonianFamily::XY
                                                          ? "embed-uniform" : "fldc");
        const double obs_variance = cfg.num("obs_variance", 1.0);

        CsvWriter csv((fs::path(cfg.out_dir) / "spectrum.csv").string(),
                      {"trial", "lmin_K0", "lmax_K0", "lower", "upper", "pass", "vacuous"});
        int passes = 0;
        for (int t = 0; t < trials; ++t) {
            Rng rng = substream(seed, {0x627261, static_cast<uint64_t>(t)});
            LocalZObservable obs = sample_coeffs(n, obs_variance, rng);
            Provenance prov{.generator = generator, .seed = mix(seed, 31 * uint64_t(t) + 7),
                            .n_qubits = n, .count = size_a,
                            .fldc_blocks = cfg.integer("L", 1), .split = "train"};
            Dataset data = generate_dataset(prov);
            WindowAssignment wins = make_windows(n, s, Connectivity::OneDCyclic, rng);
            Ansatz ansatz = sample_ansatz(n, s, depth, wins, family, rng);
            std::vector<double> theta0(depth, 0.0);
            JacobianResult jac = jacobian(ansatz, theta0, data.states, obs);
            CoeffStats stats = coeff_matrix(data.states, wins, family);
            BoundReport rep = spectrum_bracket(qntk(jac), stats, obs, family, k, delta);
            if (rep.pass) ++passes;
            csv.row({std::to_string(t), fmt_g(rep.empirical_min), fmt_g(rep.empirical_max),
                     fmt_g(rep.lower), fmt_g(rep.upper), rep.pass ? "1" : "0",
                     rep.vacuous ? "1" : "0"});
        }
        summary["pass_fraction"] = static_cast<double>(passes) / trials;
        summary["target_fraction"] = 1.0 - delta;
        summary["meets_delta"] = static_cast<double>(passes) / trials >= 1.0 - delta;
    } else {
        throw std::invalid_argument("spectrum: unknown mode " + mode);
    }
    return summary;
}

json run_moment_check_cfg(const ExperimentConfig& cfg) {
    MomentCheckReport rep = tdesign_moment_check(static_cast<uint32_t>(cfg.integer("n", 4)),
                                                 cfg.integer("trials", 10000), cfg.seed());
    CsvWriter csv((fs::path(cfg.out_dir) / "moment_check.csv").string(),
                  {"identity", "mc_mean", "exact", "dev_sigma"});
    csv.row({"1", fmt_g(rep.first_mc), fmt_g(rep.first_exact), fmt_g(rep.first_dev_sigma)});
    csv.row({"2", fmt_g(rep.second_mc), fmt_g(rep.second_exact), fmt_g(rep.second_dev_sigma)});
    return json{{"first_dev_sigma", rep.first_dev_sigma},
                {"second_dev_sigma", rep.second_dev_sigma},
                {"trials", rep.trials},
                {"pass", rep.pass}};
}

}  // namespace

json run_experiment(const ExperimentConfig& cfg) {
    auto start = std::chrono::steady_clock::now();
    fs::create_directories(cfg.out_dir);

    json summary;
    if (cfg.kind == "qdl") {
        summary = run_qdl_like(cfg, false);
    } else if (cfg.kind == "wine") {
        summary = run_qdl_like(cfg, true);
    } else if (cfg.kind == "curse-qkm") {
        summary = run_curse_qkm_cfg(cfg);
    } else if (cfg.kind == "curse-qnn") {
        summary = run_curse_qnn_cfg(cfg);
    } else if (cfg.kind == "coeff-stats") {
        summary = run_coeff_stats_cfg(cfg);
    } else if (cfg.kind == "spectrum") {
        summary = run_spectrum_cfg(cfg);
    } else if (cfg.kind == "moment-check") {
        summary = run_moment_check_cfg(cfg);
    } else {
        throw std::invalid_argument("unknown experiment kind: " + cfg.kind);
    }

    write_json((fs::path(cfg.out_dir) / "summary.json").string(), summary);

    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json manifest{{"config", config_echo(cfg)},
                  {"version", version_string()},
                  {"wall_clock_sec", wall},
                  {"seed", cfg.seed()}};
    write_json((fs::path(cfg.out_dir) / "manifest.json").string(), manifest);
    return summary;
}

}  // namespace qml
