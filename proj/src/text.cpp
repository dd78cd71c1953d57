#include "resdep/text.hpp"

#include <charconv>
#include <cmath>

#include "resdep/error.hpp"

namespace resdep {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

double parse_double(std::string_view s, std::string_view what) {
  const std::string t = trim(s);
  if (t == "nan") return std::nan("");
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw UsageError("invalid number for " + std::string(what) + ": '" + t + "'");
  }
  return v;
}

std::uint64_t parse_u64(std::string_view s, std::string_view what) {
  const std::string t = trim(s);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw UsageError("invalid non-negative integer for " + std::string(what) + ": '" + t + "'");
  }
  return v;
}

std::size_t parse_size(std::string_view s, std::string_view what) {
  return static_cast<std::size_t>(parse_u64(s, what));
}

}  // namespace resdep
