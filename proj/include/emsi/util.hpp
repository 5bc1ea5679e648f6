#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace emsi {

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
bool starts_with(std::string_view s, std::string_view prefix);

/// Deterministic text formatting for doubles; used everywhere a number
/// ends up in an output file so reruns stay byte-identical.
std::string fmt_double(double v);

std::uint64_t fnv1a64(std::string_view data);

/// 64-bit hash as fixed-width hex, used for config fingerprints.
std::string hex64(std::uint64_t v);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace emsi
