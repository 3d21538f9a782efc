#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace resonant::harness {

inline const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> s{"resonances", "nonlin",    "identities", "estimates",
                                            "strichartz", "simulate", "morawetz"};
    return s;
}

// Every field has a default; `windows` is filled per subcommand by resolve().
struct ExperimentConfig {
    std::string subcommand = "resonances";
    int window = 3;
    std::vector<int> windows;
    std::vector<double> beta{0.8, 0.875, 0.9, 0.95, 1.0};
    std::uint64_t seed = 1;
    int trials = 100;

    double grid_L = 32.0;
    int grid_N = 128;
    // Unset time fields take the bundled configuration's values.
    std::optional<double> dt;
    std::optional<double> t_end;
    std::optional<int> diagnostics_stride;
    std::optional<int> snapshot_stride;
    std::string initial = "single-gaussian";
    std::string write_snapshots = "final";  // none | final | all

    std::vector<std::string> morawetz_configs{"small-data", "small-data-single"};
    std::vector<int> bilinear_N1{16, 32, 64};
    int bilinear_N2 = 4;

    std::string output = "out";
    std::uint64_t memory_budget = 2ULL << 30;
    std::uint64_t quadrature_budget = 20'000'000'000ULL;
};

// Applies `j` on top of `base`. Unknown keys and type mismatches throw
// ConfigError naming the field path, e.g. "grid.N".
ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig base = {});
ExperimentConfig load_config(const std::filesystem::path& p, ExperimentConfig base = {});
nlohmann::ordered_json to_json(const ExperimentConfig& c);

// Range checks and per-subcommand defaults. Throws ConfigError.
ExperimentConfig resolve(ExperimentConfig c);

// sha256 of the canonical JSON of the resolved config without `output`.
std::string config_hash(const ExperimentConfig& c);

struct RunResult {
    int exit_code = 0;
    std::string message;
    std::filesystem::path manifest;
    nlohmann::ordered_json summary;
};

// Runs the campaign and writes artifacts plus manifest.json into c.output.
// Library errors propagate; use exit_code_for() to map them.
RunResult run(const ExperimentConfig& c);

// 2 config (including out-of-range parameters), 3 budget, 4 numerical
// instability, 1 anything else.
int exit_code_for(const std::exception& e);

}  // namespace resonant::harness
