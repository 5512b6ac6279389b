#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qml/experiments.hpp"
#include "qml/parallel.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::optional<uint64_t> seed;
    std::string out_dir;
    int threads = 0;
    bool paper_scale = false;
    std::vector<std::string> overrides;
};

void attach_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON config file (or a previous manifest.json)");
    cmd->add_option("--seed", args.seed, "master RNG seed (mandatory unless set in the config)");
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--threads", args.threads, "worker threads (0 = hardware)");
    cmd->add_flag("--paper-scale", args.paper_scale, "paper-scale presets (N=12/13, long runs)");
    cmd->add_option("--set", args.overrides, "config override KEY=VALUE (repeatable)")
        ->take_all();
}

int run(const std::string& kind, const CommonArgs& args) {
    qml::ExperimentConfig cfg;
    if (!args.config_path.empty()) cfg = qml::load_config_file(args.config_path);
    cfg.kind = kind;
    if (args.paper_scale) cfg.paper_scale = true;
    if (args.seed.has_value()) cfg.params["seed"] = *args.seed;
    if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
    for (const std::string& ov : args.overrides) cfg.set_override(ov);

    int threads = args.threads;
    if (threads == 0) {
        if (const char* env = std::getenv("QML_THREADS")) threads = std::atoi(env);
    }
    qml::set_thread_count(threads);

    nlohmann::json summary = qml::run_experiment(cfg);
    std::cout << summary.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum kernel / QNTK training laboratory"};
    app.require_subcommand(1);

    const std::vector<std::string> kinds = {"qdl",         "wine",     "curse-qkm",   "curse-qnn",
                                            "coeff-stats", "spectrum", "moment-check"};
    const std::vector<std::string> descriptions = {
        "quantum dynamics learning with FLDC states and a Heisenberg target",
        "wine binary classification with qubit embedding",
        "kernel-method generalization under Haar data (Monte Carlo)",
        "frozen-kernel QNN generalization under Haar data (Monte Carlo)",
        "Pauli-coefficient statistics of generated state families",
        "QNTK spectrum versus the analytic brackets",
        "Haar moment identities by Monte Carlo",
    };

    std::vector<CommonArgs> args(kinds.size());
    for (std::size_t i = 0; i < kinds.size(); ++i) {
        CLI::App* cmd = app.add_subcommand(kinds[i], descriptions[i]);
        attach_common(cmd, args[i]);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        for (std::size_t i = 0; i < kinds.size(); ++i) {
            if (app.get_subcommand(kinds[i])->parsed()) return run(kinds[i], args[i]);
        }
        return 1;
    } catch (const std::exception& e) {
        nlohmann::json err{{"error", e.what()}};
        std::cerr << err.dump() << "\n";
        return 1;
    }
}
