#pragma once

// Small text helpers shared by the file formats: shortest round-trip double
// formatting, strict numeric parsing, delimited-line splitting and ordered
// key=value documents.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "dpvs/errors.hpp"

namespace dpvs {

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(delim, start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

/// Finite double; anything else (including nan/inf text) is a ParseError.
inline double parse_finite(std::string_view token, std::size_t line) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size() || token.empty())
    throw ParseError("not a number: '" + std::string(token) + "'", line);
  if (!std::isfinite(value))
    throw ParseError("non-finite value: '" + std::string(token) + "'", line);
  return value;
}

inline std::uint64_t parse_u64(std::string_view token, std::size_t line = 0) {
  token = trim(token);
  std::uint64_t value = 0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size() || token.empty())
    throw ParseError("not an unsigned integer: '" + std::string(token) + "'", line);
  return value;
}

inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string(), 0);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

inline std::ofstream open_for_write(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError("cannot write " + path.string(), 0);
  return out;
}

/// Ordered key=value document; '#' starts a comment line.
class KeyValueDoc {
 public:
  void set(std::string key, std::string value) {
    for (auto& [k, v] : entries_)
      if (k == key) {
        v = std::move(value);
        return;
      }
    entries_.emplace_back(std::move(key), std::move(value));
  }
  void set(std::string key, double value) { set(std::move(key), format_double(value)); }
  void set(std::string key, std::uint64_t value) { set(std::move(key), std::to_string(value)); }
  void set(std::string key, int value) { set(std::move(key), std::to_string(value)); }
  void set(std::string key, std::string_view value) { set(std::move(key), std::string(value)); }
  void set(std::string key, const char* value) { set(std::move(key), std::string(value)); }

  bool has(std::string_view key) const {
    for (const auto& [k, v] : entries_)
      if (k == key) return true;
    return false;
  }

  const std::string& get(std::string_view key) const {
    for (const auto& [k, v] : entries_)
      if (k == key) return v;
    throw ParseError("missing key '" + std::string(key) + "'", 0);
  }

  double get_double(std::string_view key) const { return parse_finite(get(key), 0); }
  std::uint64_t get_u64(std::string_view key) const { return parse_u64(get(key)); }

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  std::string str(std::string_view header = {}) const {
    std::ostringstream out;
    if (!header.empty()) out << "# " << header << '\n';
    for (const auto& [k, v] : entries_) out << k << '=' << v << '\n';
    return out.str();
  }

  void write(const std::filesystem::path& path, std::string_view header = {}) const {
    auto out = open_for_write(path);
    out << str(header);
  }

  static KeyValueDoc read(const std::filesystem::path& path) {
    KeyValueDoc doc;
    const auto lines = read_lines(path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const std::string_view line = trim(lines[i]);
      if (line.empty() || line.front() == '#') continue;
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw ParseError("expected key=value", i + 1);
      doc.set(std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))));
    }
    return doc;
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

template <class Range>
std::string join_doubles(const Range& values, char delim = ',') {
  std::string out;
  bool first = true;
  for (double v : values) {
    if (!first) out += delim;
    out += format_double(v);
    first = false;
  }
  return out;
}

inline std::vector<double> parse_double_list(std::string_view text, char delim = ',') {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  for (auto tok : split(text, delim)) out.push_back(parse_finite(tok, 0));
  return out;
}

}  // namespace dpvs
