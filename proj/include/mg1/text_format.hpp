#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mg1 {

/// Shortest decimal form that parses back to the identical double.
std::string format_double(double value);

/// Strict parsers: the whole (trimmed) field must be consumed.
double parse_double(std::string_view text);
std::uint64_t parse_uint(std::string_view text);

std::vector<std::string_view> split(std::string_view text, char sep);
std::string_view trim(std::string_view text);

/// 64-bit FNV-1a, rendered as `fnv1a64:<16 hex digits>`.
std::string content_digest(std::string_view bytes);

}  // namespace mg1
