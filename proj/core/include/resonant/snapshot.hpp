#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "resonant/field.hpp"

namespace resonant {

inline constexpr std::uint32_t kSnapshotVersion = 1;

struct SnapshotMeta {
    std::string config_hash;
};

// Writes <path> (binary) and <path>.json (sidecar with payload sha256, config
// hash and conventions).
void write_snapshot(const std::filesystem::path& path, const FieldState& s, const SnapshotMeta& meta = {});

// Throws FormatError on bad magic, truncation or sidecar hash mismatch and
// UnsupportedVersionError on a version other than kSnapshotVersion. The
// sidecar is checked when present.
FieldState read_snapshot(const std::filesystem::path& path);

// read(write(s)), the roundtrip used by the CLI self-check.
FieldState snapshot_roundtrip(const std::filesystem::path& path, const FieldState& s);

}  // namespace resonant
