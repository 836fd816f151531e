#pragma once

// Plain key=value configuration text and duration literals with unit suffixes.

#include <cctype>
#include <charconv>
#include <cstdint>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>

#include "dave/error.hpp"

namespace dave {

using key_value_map = std::map<std::string, std::string>;

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// Lines are `key = value`; blank lines and lines starting with '#' are skipped.
// Duplicate keys are errors.
inline key_value_map parse_key_values(std::istream& in) {
  key_value_map out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw error(errc::config_error, "line " + std::to_string(lineno) + ": expected key=value");
    }
    std::string key = trim(std::string_view(t).substr(0, eq));
    std::string value = trim(std::string_view(t).substr(eq + 1));
    if (key.empty()) throw error(errc::config_error, "line " + std::to_string(lineno) + ": empty key");
    if (!out.emplace(key, value).second) {
      throw error(errc::config_error, "line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
  }
  return out;
}

inline void reject_unknown_keys(const key_value_map& kv, const std::set<std::string>& known) {
  for (const auto& [k, v] : kv) {
    if (!known.count(k)) throw error(errc::config_error, "unknown key '" + k + "'");
  }
}

inline std::uint64_t parse_u64(std::string_view s, std::string_view what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw error(errc::config_error, std::string(what) + ": not an unsigned integer: '" + std::string(s) + "'");
  }
  return v;
}

// "7200", "7200s", "2h", "1d", "1w", "10.5h" -> seconds. Fractional values
// must land on a whole second.
inline std::uint64_t parse_duration(std::string_view text) {
  std::string s = trim(text);
  if (s.empty()) throw error(errc::config_error, "empty duration");
  std::uint64_t unit = 1;
  switch (s.back()) {
    case 's': unit = 1; s.pop_back(); break;
    case 'm': unit = 60; s.pop_back(); break;
    case 'h': unit = 3600; s.pop_back(); break;
    case 'd': unit = 86400; s.pop_back(); break;
    case 'w': unit = 604800; s.pop_back(); break;
    default: break;
  }
  auto dot = s.find('.');
  if (dot == std::string::npos) return parse_u64(s, "duration") * unit;
  std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
  if (frac.empty() || frac.size() > 9) throw error(errc::config_error, "bad duration '" + std::string(text) + "'");
  std::uint64_t scale = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
  std::uint64_t num = (whole.empty() ? 0 : parse_u64(whole, "duration")) * scale + parse_u64(frac, "duration");
  if ((num * unit) % scale != 0) {
    throw error(errc::config_error, "duration '" + std::string(text) + "' is not a whole number of seconds");
  }
  return num * unit / scale;
}

}  // namespace dave
