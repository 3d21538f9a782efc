#include "artifacts.hpp"

#include <algorithm>
#include <fstream>

#include "resonant/checksum.hpp"
#include "resonant/errors.hpp"

namespace resonant::harness {

ArtifactSink::ArtifactSink(std::filesystem::path dir, std::string hash) : dir_(std::move(dir)), hash_(std::move(hash)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec || !std::filesystem::is_directory(dir_))
        throw ConfigError("output", "cannot create output directory " + dir_.string());
}

void ArtifactSink::write_text(const std::string& name, const std::string& content) {
    const auto p = dir_ / name;
    std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) throw Error("cannot write " + p.string());
    add_file(name);
}

void ArtifactSink::write_json(const std::string& name, const nlohmann::ordered_json& j) {
    write_text(name, j.dump(2) + "\n");
}

void ArtifactSink::add_file(const std::string& name) {
    if (std::find(files_.begin(), files_.end(), name) == files_.end()) files_.push_back(name);
}

std::filesystem::path ArtifactSink::write_manifest(const nlohmann::ordered_json& config,
                                                   const nlohmann::ordered_json& summary) {
    nlohmann::ordered_json m;
    m["tool"] = "resonant";
    m["config_hash"] = hash_;
    m["config"] = config;
    m["summary"] = summary;
    auto sorted = files_;
    std::sort(sorted.begin(), sorted.end());
    nlohmann::ordered_json arts = nlohmann::ordered_json::array();
    for (const auto& f : sorted) {
        const auto p = dir_ / f;
        arts.push_back({{"path", f}, {"bytes", std::filesystem::file_size(p)}, {"sha256", sha256_file(p)}});
    }
    m["artifacts"] = arts;
    const auto p = dir_ / "manifest.json";
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << m.dump(2) << '\n';
    if (!out) throw Error("cannot write " + p.string());
    return p;
}

Csv::Csv(const std::string& hash, const std::vector<std::string>& columns) {
    out_ = "# config_hash=" + hash + "\n";
    for (std::size_t k = 0; k < columns.size(); ++k) out_ += (k ? "," : "") + columns[k];
    out_ += '\n';
}

}  // namespace resonant::harness
