#include <algorithm>
#include <fstream>
#include <set>

#include "harness.hpp"
#include "resonant/checksum.hpp"
#include "resonant/errors.hpp"
#include "resonant/field.hpp"

namespace resonant::harness {

using nlohmann::json;

namespace {

std::string join(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
}

void reject_unknown(const json& obj, const std::string& prefix, std::initializer_list<const char*> known) {
    if (!obj.is_object()) throw ConfigError(prefix, "expected an object");
    const std::set<std::string> k(known.begin(), known.end());
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!k.contains(it.key())) throw ConfigError(join(prefix, it.key()), "unknown key");
}

template <class T>
T get_as(const json& v, const std::string& path);

template <>
int get_as<int>(const json& v, const std::string& path) {
    if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
    const auto x = v.get<std::int64_t>();
    if (x < -(1LL << 31) || x >= (1LL << 31)) throw ConfigError(path, "integer out of range");
    return static_cast<int>(x);
}

template <>
std::uint64_t get_as<std::uint64_t>(const json& v, const std::string& path) {
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0))
        throw ConfigError(path, "expected a non-negative integer");
    return v.get<std::uint64_t>();
}

template <>
double get_as<double>(const json& v, const std::string& path) {
    if (!v.is_number()) throw ConfigError(path, "expected a number");
    return v.get<double>();
}

template <>
std::string get_as<std::string>(const json& v, const std::string& path) {
    if (!v.is_string()) throw ConfigError(path, "expected a string");
    return v.get<std::string>();
}

template <class T>
std::vector<T> get_list(const json& v, const std::string& path) {
    if (!v.is_array()) throw ConfigError(path, "expected an array");
    std::vector<T> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(get_as<T>(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

template <class T>
void set_if(const json& obj, const char* key, const std::string& prefix, T& dst) {
    if (obj.contains(key)) dst = get_as<T>(obj.at(key), join(prefix, key));
}

template <class T>
void set_opt(const json& obj, const char* key, const std::string& prefix, std::optional<T>& dst) {
    if (!obj.contains(key)) return;
    if (obj.at(key).is_null()) dst.reset();
    else dst = get_as<T>(obj.at(key), join(prefix, key));
}

template <class T>
void set_list(const json& obj, const char* key, const std::string& prefix, std::vector<T>& dst) {
    if (obj.contains(key)) dst = get_list<T>(obj.at(key), join(prefix, key));
}

template <class T>
json opt_json(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

void require(bool ok, const std::string& path, const std::string& what) {
    if (!ok) throw ConfigError(path, what);
}

}  // namespace

ExperimentConfig config_from_json(const json& j, ExperimentConfig c) {
    reject_unknown(j, "",
                   {"subcommand", "window", "windows", "beta", "seed", "trials", "grid", "time", "initial",
                    "write_snapshots", "morawetz", "bilinear", "output", "budgets"});
    set_if(j, "subcommand", "", c.subcommand);
    set_if(j, "window", "", c.window);
    set_list(j, "windows", "", c.windows);
    set_list(j, "beta", "", c.beta);
    set_if(j, "seed", "", c.seed);
    set_if(j, "trials", "", c.trials);
    set_if(j, "initial", "", c.initial);
    set_if(j, "write_snapshots", "", c.write_snapshots);
    set_if(j, "output", "", c.output);
    if (j.contains("grid")) {
        const json& g = j.at("grid");
        reject_unknown(g, "grid", {"L", "N"});
        set_if(g, "L", "grid", c.grid_L);
        set_if(g, "N", "grid", c.grid_N);
    }
    if (j.contains("time")) {
        const json& t = j.at("time");
        reject_unknown(t, "time", {"dt", "t_end", "diagnostics_stride", "snapshot_stride"});
        set_opt(t, "dt", "time", c.dt);
        set_opt(t, "t_end", "time", c.t_end);
        set_opt(t, "diagnostics_stride", "time", c.diagnostics_stride);
        set_opt(t, "snapshot_stride", "time", c.snapshot_stride);
    }
    if (j.contains("morawetz")) {
        const json& m = j.at("morawetz");
        reject_unknown(m, "morawetz", {"configs"});
        set_list(m, "configs", "morawetz", c.morawetz_configs);
    }
    if (j.contains("bilinear")) {
        const json& b = j.at("bilinear");
        reject_unknown(b, "bilinear", {"N1", "N2"});
        set_list(b, "N1", "bilinear", c.bilinear_N1);
        set_if(b, "N2", "bilinear", c.bilinear_N2);
    }
    if (j.contains("budgets")) {
        const json& b = j.at("budgets");
        reject_unknown(b, "budgets", {"memory_bytes", "quadrature"});
        set_if(b, "memory_bytes", "budgets", c.memory_budget);
        set_if(b, "quadrature", "budgets", c.quadrature_budget);
    }
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& p, ExperimentConfig base) {
    std::ifstream in(p);
    if (!in) throw ConfigError("", "cannot read config file " + p.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("", "config file " + p.string() + " is not valid JSON: " + e.what());
    }
    return config_from_json(j, std::move(base));
}

nlohmann::ordered_json to_json(const ExperimentConfig& c) {
    nlohmann::ordered_json j;
    j["subcommand"] = c.subcommand;
    j["window"] = c.window;
    j["windows"] = c.windows;
    j["beta"] = c.beta;
    j["seed"] = c.seed;
    j["trials"] = c.trials;
    j["grid"] = {{"L", c.grid_L}, {"N", c.grid_N}};
    j["time"] = {{"dt", opt_json(c.dt)},
                 {"t_end", opt_json(c.t_end)},
                 {"diagnostics_stride", opt_json(c.diagnostics_stride)},
                 {"snapshot_stride", opt_json(c.snapshot_stride)}};
    j["initial"] = c.initial;
    j["write_snapshots"] = c.write_snapshots;
    j["morawetz"] = {{"configs", c.morawetz_configs}};
    j["bilinear"] = {{"N1", c.bilinear_N1}, {"N2", c.bilinear_N2}};
    j["output"] = c.output;
    j["budgets"] = {{"memory_bytes", c.memory_budget}, {"quadrature", c.quadrature_budget}};
    return j;
}

ExperimentConfig resolve(ExperimentConfig c) {
    const auto& subs = subcommands();
    require(std::find(subs.begin(), subs.end(), c.subcommand) != subs.end(), "subcommand",
            "unknown subcommand '" + c.subcommand + "'");
    require(c.window >= 0 && c.window <= 64, "window", "must be in [0, 64]");
    require(c.trials >= 1, "trials", "must be positive");
    require(!c.beta.empty(), "beta", "must not be empty");
    for (std::size_t i = 0; i < c.beta.size(); ++i)
        require(c.beta[i] > 0 && c.beta[i] <= 1, "beta[" + std::to_string(i) + "]", "must be in (0, 1]");
    require(c.grid_L > 0, "grid.L", "must be positive");
    require(c.grid_N >= 4 && c.grid_N % 2 == 0, "grid.N", "must be even and at least 4");
    if (c.dt) require(*c.dt > 0, "time.dt", "must be positive");
    if (c.t_end) require(*c.t_end >= 0, "time.t_end", "must be non-negative");
    if (c.diagnostics_stride) require(*c.diagnostics_stride >= 1, "time.diagnostics_stride", "must be at least 1");
    if (c.snapshot_stride) require(*c.snapshot_stride >= 0, "time.snapshot_stride", "must be non-negative");
    const auto names = bundled_names();
    require(std::find(names.begin(), names.end(), c.initial) != names.end(), "initial",
            "unknown bundled configuration '" + c.initial + "'");
    for (std::size_t i = 0; i < c.morawetz_configs.size(); ++i)
        require(std::find(names.begin(), names.end(), c.morawetz_configs[i]) != names.end(),
                "morawetz.configs[" + std::to_string(i) + "]", "unknown bundled configuration");
    require(c.write_snapshots == "none" || c.write_snapshots == "final" || c.write_snapshots == "all",
            "write_snapshots", "must be none, final or all");
    require(c.bilinear_N2 >= 1, "bilinear.N2", "must be positive");
    for (std::size_t i = 0; i < c.bilinear_N1.size(); ++i)
        require(c.bilinear_N1[i] >= c.bilinear_N2, "bilinear.N1[" + std::to_string(i) + "]", "must be >= N2");
    require(!c.output.empty(), "output", "must not be empty");

    if (c.windows.empty()) {
        if (c.subcommand == "estimates") c.windows = {4, 8, 16};
        else if (c.subcommand == "strichartz") c.windows = {4, 8, 16};
    }
    for (std::size_t i = 0; i < c.windows.size(); ++i) {
        require(c.windows[i] >= 0 && c.windows[i] <= 64, "windows[" + std::to_string(i) + "]", "must be in [0, 64]");
        if (i > 0) require(c.windows[i] > c.windows[i - 1], "windows", "must be strictly increasing");
    }
    if (c.subcommand == "strichartz")
        for (std::size_t i = 0; i < c.windows.size(); ++i)
            require(c.windows[i] >= 1, "windows[" + std::to_string(i) + "]", "annulus scale must be positive");
    return c;
}

std::string config_hash(const ExperimentConfig& c) {
    auto j = to_json(c);
    j.erase("output");
    return sha256_hex(j.dump());
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return 2;
    // Out-of-range parameters reach the library only through the config.
    if (dynamic_cast<const ConstraintError*>(&e) || dynamic_cast<const WindowError*>(&e)) return 2;
    if (dynamic_cast<const CapacityError*>(&e)) return 3;
    if (dynamic_cast<const InstabilityError*>(&e)) return 4;
    return 1;
}

}  // namespace resonant::harness
