#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "harness.hpp"
#include "resonant/errors.hpp"

using namespace resonant;
using namespace resonant::harness;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("resonant-" + tag + "-" + std::to_string(::getpid()));
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

json manifest(const fs::path& dir) { return json::parse(slurp(dir / "manifest.json")); }

std::string config_error_path(const json& j) {
    try {
        resolve(config_from_json(j));
    } catch (const ConfigError& e) {
        return e.path();
    }
    return "<none>";
}

int code_of(const ExperimentConfig& c) {
    try {
        run(c);
    } catch (const std::exception& e) {
        return exit_code_for(e);
    }
    return 0;
}

}  // namespace

TEST_CASE("empty config yields the defaults") {
    const auto c = config_from_json(json::object());
    CHECK(to_json(c) == to_json(ExperimentConfig{}));
    CHECK(config_hash(c) == config_hash(ExperimentConfig{}));
    // Serialization round trip.
    const auto back = config_from_json(json::parse(to_json(c).dump()));
    CHECK(to_json(back) == to_json(c));
}

TEST_CASE("config errors name the offending field") {
    CHECK(config_error_path({{"grid", {{"M", 3}}}}) == "grid.M");
    CHECK(config_error_path({{"colour", 1}}) == "colour");
    CHECK(config_error_path({{"time", {{"dt", "fast"}}}}) == "time.dt");
    CHECK(config_error_path({{"beta", {0.5, 2.0}}}) == "beta[1]");
    CHECK(config_error_path({{"window", -1}}) == "window");
    CHECK(config_error_path({{"subcommand", "plot"}}) == "subcommand");
    CHECK(config_error_path({{"grid", {{"N", 31}}}}) == "grid.N");
    CHECK(config_error_path({{"subcommand", "estimates"}, {"windows", {8, 4}}}) == "windows");
    CHECK(config_error_path({{"seed", -3}}) == "seed");
    CHECK(config_error_path(json::object()) == "<none>");
}

TEST_CASE("per-subcommand defaults are filled in") {
    ExperimentConfig c;
    c.subcommand = "estimates";
    CHECK(resolve(c).windows == std::vector<int>{4, 8, 16});
    c.windows = {2};
    CHECK(resolve(c).windows == std::vector<int>{2});
}

TEST_CASE("config hash ignores the output location only") {
    ExperimentConfig a, b;
    b.output = "elsewhere";
    CHECK(config_hash(a) == config_hash(b));
    b.seed = 2;
    CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("resonances at K = 1") {
    TempDir dir("res");
    ExperimentConfig c;
    c.window = 1;
    c.output = dir.path.string();
    const auto r = run(c);
    CHECK(r.summary["origin"]["total"] == 25);
    const auto m = manifest(dir.path);
    CHECK(m["config"]["window"] == 1);
    CHECK(m["config"]["seed"] == 1);
    const std::string csv = slurp(dir.path / "resonances.csv");
    CHECK(csv.rfind("# config_hash=" + m["config_hash"].get<std::string>() + "\n", 0) == 0);
}

TEST_CASE("artifacts are byte-identical for identical config and seed") {
    TempDir a("det-a"), b("det-b");
    for (const std::string sub : {"identities", "estimates", "simulate"}) {
        ExperimentConfig c;
        c.subcommand = sub;
        c.window = 2;
        c.windows = {2, 3};
        c.trials = 8;
        c.grid_L = 16;
        c.grid_N = 32;
        c.initial = "square";
        c.t_end = 0.1;
        c.dt = 0.01;
        c.diagnostics_stride = 2;
        c.output = (a.path / sub).string();
        run(c);
        c.output = (b.path / sub).string();
        run(c);
        const auto ma = manifest(a.path / sub), mb = manifest(b.path / sub);
        CHECK(ma["artifacts"] == mb["artifacts"]);
        for (const auto& art : ma["artifacts"]) {
            const std::string p = art["path"];
            CHECK(slurp(a.path / sub / p) == slurp(b.path / sub / p));
        }
        c.seed = 9;
        c.output = (b.path / (sub + "-other")).string();
        run(c);
        if (sub != "simulate") CHECK(manifest(b.path / (sub + "-other"))["artifacts"] != ma["artifacts"]);
    }
}

TEST_CASE("manifest lists every file written") {
    TempDir dir("manifest");
    ExperimentConfig c;
    c.subcommand = "simulate";
    c.initial = "small-data";
    c.grid_L = 16;
    c.grid_N = 32;
    c.window = 1;
    c.t_end = 0.1;
    c.write_snapshots = "all";
    c.output = dir.path.string();
    run(c);
    std::set<std::string> listed;
    const json m = manifest(dir.path);
    for (const auto& a : m["artifacts"]) listed.insert(a["path"].get<std::string>());
    std::set<std::string> on_disk;
    for (const auto& e : fs::recursive_directory_iterator(dir.path))
        if (e.is_regular_file()) on_disk.insert(fs::relative(e.path(), dir.path).string());
    on_disk.erase("manifest.json");
    CHECK(listed == on_disk);
    CHECK(listed.count("snapshots/final.rsns") == 1);
    CHECK(listed.count("snapshots/snap_0000.rsns.json") == 1);
    CHECK(listed.count("diagnostics.csv") == 1);
}

TEST_CASE("exit codes") {
    TempDir dir("codes");
    ExperimentConfig c;
    c.output = dir.path.string();
    c.subcommand = "nonlin";
    c.window = 4;
    c.quadrature_budget = 10;
    CHECK(code_of(c) == 3);
    c.quadrature_budget = 20'000'000'000ULL;
    c.subcommand = "simulate";
    c.initial = "full-window";
    c.window = 1;
    c.grid_L = 16;
    c.grid_N = 16;
    c.dt = 0.5;
    c.t_end = 1.0;
    CHECK(code_of(c) == 4);
    c.grid_N = 15;
    CHECK(code_of(c) == 2);
    c.grid_N = 16;
    c.initial = "square";
    c.window = 0;
    CHECK(code_of(c) == 2);
}
