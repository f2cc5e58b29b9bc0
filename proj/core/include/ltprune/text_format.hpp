// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace ltprune {

/// Shortest decimal string that round-trips to the same double
/// (std::to_chars). This is the one formatter behind every CSV and text
/// report, so outputs are byte-stable across runs and platforms.
std::string format_double(double value);

/// Parses a double with std::from_chars; the whole string must be
/// consumed. Throws std::invalid_argument otherwise.
double parse_double(std::string_view text);

/// Parses a nonnegative integer; throws std::invalid_argument otherwise.
std::size_t parse_size(std::string_view text);

/// Flat key=value config text: one pair per line, '#' starts a comment,
/// blank lines ignored, whitespace around keys and values trimmed.
/// Duplicate keys keep the last value. `origin` names the source in
/// error messages.
std::map<std::string, std::string> parse_key_value_text(std::string_view text,
                                                        std::string_view origin = "<config>");
std::map<std::string, std::string> parse_key_value_file(const std::filesystem::path& path);

}  // namespace ltprune
