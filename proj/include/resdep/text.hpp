#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

// Small parsing and formatting helpers shared by the config, report and CSV
// readers.
namespace resdep {

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

/// Shortest decimal text that reads back to the same double; "nan", "inf"
/// and "-inf" for non-finite values.
std::string format_double(double v);

/// Strict parsers: the whole token must be consumed. Throw UsageError naming
/// `what` on failure.
double parse_double(std::string_view s, std::string_view what);
std::size_t parse_size(std::string_view s, std::string_view what);
std::uint64_t parse_u64(std::string_view s, std::string_view what);

}  // namespace resdep
