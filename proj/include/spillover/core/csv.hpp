#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "spillover/error.hpp"

namespace spillover::csv {

/// A parsed CSV file. Rows keep their 1-based line number for diagnostics.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> line_numbers;
  std::vector<std::string> comments;  // lines starting with '#', without the marker

  std::optional<std::size_t> column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    return std::nullopt;
  }

  std::size_t require_column(std::string_view name, const std::string& context) const {
    if (auto c = column(name)) return *c;
    throw DataError(context + ": missing column '" + std::string(name) + "'");
  }
};

inline std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  out.push_back(std::move(field));
  return out;
}

inline Table parse(std::istream& in, const std::string& source) {
  Table t;
  std::string line;
  int lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lineno == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    if (line.empty()) continue;
    if (line.front() == '#') {
      t.comments.push_back(line.substr(1));
      continue;
    }
    auto fields = split_line(line);
    if (!have_header) {
      t.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != t.header.size()) {
      throw DataError(source + ": row at line " + std::to_string(lineno) + " has " +
                      std::to_string(fields.size()) + " fields, header has " +
                      std::to_string(t.header.size()));
    }
    t.rows.push_back(std::move(fields));
    t.line_numbers.push_back(lineno);
  }
  if (!have_header) throw DataError(source + ": empty CSV (no header row)");
  return t;
}

inline Table read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return parse(in, path.string());
}

/// Strict floating-point parse: the whole field must be a finite number.
inline std::optional<double> parse_double(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

/// Shortest representation that round-trips exactly.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline std::string escape(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

/// Row-oriented writer; each call to row() emits one line.
class Writer {
 public:
  explicit Writer(const std::filesystem::path& path) : out_(path), path_(path) {
    if (!out_) throw DataError("cannot write '" + path.string() + "'");
  }

  void comment(std::string_view text) { out_ << '#' << text << '\n'; }

  template <class... Fields>
  void row(const Fields&... fields) {
    bool first = true;
    (emit(fields, first), ...);
    out_ << '\n';
  }

  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) out_ << (i ? "," : "") << escape(fields[i]);
    out_ << '\n';
  }

  const std::filesystem::path& path() const { return path_; }

 private:
  template <class T>
  void emit(const T& v, bool& first) {
    if (!first) out_ << ',';
    first = false;
    if constexpr (std::is_floating_point_v<T>) {
      out_ << format_double(static_cast<double>(v));
    } else if constexpr (std::is_integral_v<T>) {
      out_ << v;
    } else {
      out_ << escape(std::string_view(v));
    }
  }

  std::ofstream out_;
  std::filesystem::path path_;
};

}  // namespace spillover::csv
