#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mebo/core.hpp"

namespace mebo {

/// Points: one row per line, comma separated decimal reals, no header.
/// Errors name the 1-based line and column.
Dataset parse_points_csv(std::string_view text, std::string_view source = "<memory>");
Dataset read_points_csv(const std::filesystem::path& path);

/// Shortest round-trip formatting, so equal datasets give equal bytes.
std::string format_points_csv(const Dataset& ds);
void write_points_csv(const Dataset& ds, const std::filesystem::path& path);

/// Labels: one integer per line; 0 = outlier, j >= 1 = class j.
std::vector<int> parse_labels_csv(std::string_view text, std::string_view source = "<memory>");
std::vector<int> read_labels_csv(const std::filesystem::path& path);
void write_labels_csv(const std::vector<int>& labels, const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace mebo
