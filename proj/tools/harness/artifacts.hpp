#pragma once

#include <charconv>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace resonant::harness {

// Shortest round-trip decimal form; stable across runs.
inline std::string num(double v) {
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

inline std::string num(long long v) { return std::to_string(v); }

// Collects the files of one run and writes manifest.json listing each with
// its size and sha256.
class ArtifactSink {
public:
    ArtifactSink(std::filesystem::path dir, std::string hash);

    const std::filesystem::path& dir() const noexcept { return dir_; }
    const std::string& hash() const noexcept { return hash_; }

    void write_text(const std::string& name, const std::string& content);
    void write_json(const std::string& name, const nlohmann::ordered_json& j);
    // Registers a file some other writer produced inside dir().
    void add_file(const std::string& name);

    std::filesystem::path write_manifest(const nlohmann::ordered_json& config, const nlohmann::ordered_json& summary);

private:
    std::filesystem::path dir_;
    std::string hash_;
    std::vector<std::string> files_;
};

// Builds a CSV whose first line is "# config_hash=<hash>".
class Csv {
public:
    Csv(const std::string& hash, const std::vector<std::string>& columns);
    template <class... T>
    void row(const T&... v) {
        std::size_t k = 0;
        ((out_ += (k++ ? "," : "") + cell(v)), ...);
        out_ += '\n';
    }
    const std::string& str() const noexcept { return out_; }

private:
    static std::string cell(double v) { return num(v); }
    static std::string cell(int v) { return std::to_string(v); }
    static std::string cell(long v) { return std::to_string(v); }
    static std::string cell(long long v) { return std::to_string(v); }
    static std::string cell(unsigned long v) { return std::to_string(v); }
    static std::string cell(unsigned long long v) { return std::to_string(v); }
    static std::string cell(const std::string& v) { return v; }
    static std::string cell(const char* v) { return v; }
    std::string out_;
};

}  // namespace resonant::harness
