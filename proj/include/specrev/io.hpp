#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace specrev::io {

/// Shortest decimal text that parses back to the identical double.
std::string format_double(double value);

/// Parses a complete field as a double; returns false on any trailing junk.
bool parse_double(std::string_view text, double& out);

std::vector<std::string> split_csv_line(std::string_view line);

/// Quotes a field when it contains a comma, quote or newline.
std::string csv_field(std::string_view text);

std::string trim(std::string_view text);

/// Reads the whole file; throws Error(IoError) naming the path.
std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// FNV-1a, used for stable content hashes in reports.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

std::string hex64(std::uint64_t value);

}  // namespace specrev::io
