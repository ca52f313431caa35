#include "hypermads/numformat.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

namespace hypermads {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // normalize -0
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string format_flat(const std::vector<double>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += format_number(v[i]);
  }
  return out;
}

std::optional<double> parse_number(std::string_view s) {
  // trim
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  s = s.substr(b, e - b);
  if (s.empty()) return std::nullopt;

  // from_chars on GCC does not accept "inf"/"nan" spellings consistently
  // across modes, so handle them up front.
  auto ieq = [&](std::string_view t) {
    if (s.size() != t.size()) return false;
    for (size_t i = 0; i < t.size(); ++i)
      if (std::tolower(static_cast<unsigned char>(s[i])) != t[i]) return false;
    return true;
  };
  if (ieq("inf") || ieq("+inf") || ieq("infinity"))
    return std::numeric_limits<double>::infinity();
  if (ieq("-inf") || ieq("-infinity"))
    return -std::numeric_limits<double>::infinity();
  if (ieq("nan")) return std::numeric_limits<double>::quiet_NaN();

  double out = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return out;
}

std::optional<std::vector<double>> parse_flat(std::string_view s) {
  std::vector<double> out;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i >= s.size()) break;
    size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    auto v = parse_number(s.substr(i, j - i));
    if (!v) return std::nullopt;
    out.push_back(*v);
    i = j;
  }
  return out;
}

}  // namespace hypermads
