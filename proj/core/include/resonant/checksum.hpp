#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>

namespace resonant {

// Lowercase hex SHA-256.
std::string sha256_hex(const void* data, std::size_t n);
inline std::string sha256_hex(std::string_view s) { return sha256_hex(s.data(), s.size()); }
std::string sha256_file(const std::filesystem::path& p);

}  // namespace resonant
