// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace edaflow::text {

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
std::vector<std::string> split_lines(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
bool iequals(std::string_view a, std::string_view b);

std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

// Fixed-point text with trailing zeros trimmed ("4.70" -> "4.7", "3.00" -> "3").
// The same function is used when sampling benchmark values and when the agent
// normalizes extracted numbers, so round trips compare equal as text.
std::string canonical_number(double value, int max_decimals = 6);
std::string canonical_number_text(std::string_view s);

}  // namespace edaflow::text
