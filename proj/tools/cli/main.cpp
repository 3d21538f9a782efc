#include <iostream>

#include "CLI11.hpp"
#include "harness.hpp"
#include "resonant/errors.hpp"

using namespace resonant;
using namespace resonant::harness;

int main(int argc, char** argv) {
    CLI::App app{"Resonant-system experiments: resonance tables, sequence estimates, torus and box dynamics"};
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "Run one campaign and write artifacts plus manifest.json");
    std::string sub, config_path;
    std::optional<int> window, trials, N;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> outdir, initial, snaps;
    std::optional<double> dt, t_end, L;
    std::optional<std::vector<int>> windows;
    std::optional<std::vector<double>> beta;
    run_cmd->add_option("subcommand", sub, "Campaign to run")->required()->check(CLI::IsMember(subcommands()));
    run_cmd->add_option("--config", config_path, "JSON config file; flags override its values");
    run_cmd->add_option("--window", window, "Window half-width K");
    run_cmd->add_option("--windows", windows, "Sweep list for estimates/strichartz");
    run_cmd->add_option("--beta", beta, "Exponent grid for estimates");
    run_cmd->add_option("--seed", seed, "Master seed");
    run_cmd->add_option("--trials", trials, "Random draws per point");
    run_cmd->add_option("--out", outdir, "Output directory");
    run_cmd->add_option("--initial", initial, "Bundled initial data for simulate");
    run_cmd->add_option("--dt", dt, "Time step");
    run_cmd->add_option("--t-end", t_end, "Final time");
    run_cmd->add_option("--L", L, "Box side length");
    run_cmd->add_option("--N", N, "Grid points per side");
    run_cmd->add_option("--write-snapshots", snaps, "none, final or all");

    auto* defaults_cmd = app.add_subcommand("defaults", "Print the default configuration as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (defaults_cmd->parsed()) {
        std::cout << to_json(ExperimentConfig{}).dump(2) << '\n';
        return 0;
    }

    try {
        ExperimentConfig c;
        if (!config_path.empty()) c = load_config(config_path, c);
        c.subcommand = sub;
        if (window) c.window = *window;
        if (windows) c.windows = *windows;
        if (beta) c.beta = *beta;
        if (seed) c.seed = *seed;
        if (trials) c.trials = *trials;
        if (outdir) c.output = *outdir;
        if (initial) c.initial = *initial;
        if (dt) c.dt = *dt;
        if (t_end) c.t_end = *t_end;
        if (L) c.grid_L = *L;
        if (N) c.grid_N = *N;
        if (snaps) c.write_snapshots = *snaps;
        const RunResult r = run(c);
        std::cout << r.message << '\n' << r.summary.dump(2) << '\n';
        return 0;
    } catch (const std::exception& e) {
        const int code = exit_code_for(e);
        std::cerr << "error: " << e.what() << '\n';
        return code;
    }
}
