#pragma once

// Small helpers shared by the text file formats.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace lens::text {

std::vector<std::string_view> split(std::string_view s, char sep);
std::string_view trim(std::string_view s);

/// Strict integer parse: the whole token must be consumed.
bool parse_int(std::string_view s, std::int64_t& out);
bool parse_uint(std::string_view s, std::uint64_t& out);
bool parse_double(std::string_view s, double& out);

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace lens::text
