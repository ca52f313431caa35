#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hypermads {

// Canonical, locale-independent number formatting. Every number the tool
// writes (history/stats files, neighbor listings, subprocess payloads) goes
// through these helpers so that reruns are byte-identical and values survive
// a write/parse round trip exactly.

// Shortest representation that parses back to the same double.
// Integral values print without a decimal point ("128", not "128.0");
// +infinity prints as "inf" (used for failed evaluations).
std::string format_number(double v);

// Space-separated numbers, no trailing separator.
std::string format_flat(const std::vector<double>& v);

// Strict parse of a single decimal token ("inf"/"-inf"/"nan" accepted).
// Rejects trailing garbage.
std::optional<double> parse_number(std::string_view s);

// Whitespace-separated tokens -> doubles; nullopt when any token is bad.
std::optional<std::vector<double>> parse_flat(std::string_view s);

}  // namespace hypermads
