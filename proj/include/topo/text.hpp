#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace topo::text {

/// 17 significant digits, "%.17g" style; "inf"/"-inf"/"nan" for non-finite.
std::string format_real(double value);

/// Strict decimal or scientific parse of the whole token (surrounding blanks
/// allowed). "inf" and "-inf" are accepted only when allow_inf is set.
std::optional<double> parse_real(std::string_view token, bool allow_inf = false);

std::vector<std::string_view> split(std::string_view line, char sep);

/// Lines with trailing '\r' stripped; a final empty line is dropped.
std::vector<std::string_view> lines(std::string_view text);

std::string read_file(const std::filesystem::path& path);

/// Writes through a sibling temporary file, then renames over the target.
void write_file(const std::filesystem::path& path, std::string_view contents);

} // namespace topo::text
