#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Minimal CSV helpers. Numbers are written in shortest round-trip form so
// files are bit-stable across runs.

namespace cgeem::csv {

std::vector<std::string_view> split(std::string_view line, char sep = ',');

std::string_view trim(std::string_view s);

/// Parses a full-cell double. Empty cells yield nullopt; garbage throws
/// FormatError.
std::optional<double> parse_double(std::string_view cell);

/// Shortest representation that round-trips to the same double.
std::string format_double(double v);

/// Fixed number of significant digits (for human-facing tables).
std::string format_sig(double v, int digits);

std::string join(const std::vector<std::string>& cells, char sep = ',');

}  // namespace cgeem::csv
