#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace qml {

// Flat JSON parameters plus command-line overrides. Every experiment is a
// pure function of (kind, params, seed); reruns give byte-identical CSVs.
struct ExperimentConfig {
    std::string kind;  // qdl | wine | curse-qkm | curse-qnn | coeff-stats | spectrum | moment-check
    std::string out_dir = "out";
    bool paper_scale = false;
    nlohmann::json params = nlohmann::json::object();

    bool has(const std::string& key) const { return params.contains(key); }
    uint64_t seed() const;
    double num(const std::string& key, double fallback) const;
    int integer(const std::string& key, int fallback) const;
    std::string str(const std::string& key, const std::string& fallback) const;
    std::vector<int> int_list(const std::string& key, std::vector<int> fallback) const;

    // Applies "key=value"; value parsed as JSON when possible, string otherwise.
    void set_override(const std::string& assignment);
};

ExperimentConfig load_config_file(const std::string& path);

// Runs the experiment, writes CSVs plus manifest.json under out_dir, and
// returns the summary (also written as summary.json).
nlohmann::json run_experiment(const ExperimentConfig& config);

}  // namespace qml
