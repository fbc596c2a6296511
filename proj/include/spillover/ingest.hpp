#pragma once

// Loading and alignment of event-level surprises and monthly panels.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "spillover/core/calendar.hpp"
#include "spillover/core/csv.hpp"
#include "spillover/error.hpp"

namespace spillover {

/// One FOMC announcement. `ner_change` maps a country code to the percent
/// depreciation of its currency against the dollar over the event window.
struct SurpriseEvent {
  Date date;
  double d_rate = 0.0;   // percentage points
  double d_stock = 0.0;  // percent
  std::map<std::string, double> ner_change;
};

enum class Role { surprise, us_macro, em_macro };
enum class Transform { level, log, percent };

inline const char* to_string(Role r) {
  switch (r) {
    case Role::surprise: return "surprise";
    case Role::us_macro: return "us_macro";
    case Role::em_macro: return "em_macro";
  }
  return "?";
}

inline const char* to_string(Transform t) {
  switch (t) {
    case Transform::level: return "level";
    case Transform::log: return "log";
    case Transform::percent: return "percent";
  }
  return "?";
}

inline Role parse_role(const std::string& s) {
  if (s == "surprise") return Role::surprise;
  if (s == "us_macro") return Role::us_macro;
  if (s == "em_macro") return Role::em_macro;
  throw DataError("unknown variable role '" + s + "'");
}

/// `log` stores ln(x); `percent` stores 100 ln(x). Both need x > 0.
inline Transform parse_transform(const std::string& s) {
  if (s == "level") return Transform::level;
  if (s == "log") return Transform::log;
  if (s == "percent") return Transform::percent;
  throw DataError("unknown transform '" + s + "'");
}

struct SeriesSpec {
  std::string name;
  std::filesystem::path source;
  std::string column;
  Transform transform = Transform::level;
  Role role = Role::em_macro;
};

/// Column names of an event file. Every column starting with `ner_prefix`
/// holds one country's exchange-rate change; empty cells mean "not observed".
struct EventColumns {
  std::string date = "date";
  std::string d_rate = "d_rate";
  std::string d_stock = "d_stock";
  std::string ner_prefix = "ner_";
};

struct ColumnInfo {
  std::string name;
  Role role = Role::em_macro;
  Transform transform = Transform::level;

  bool operator==(const ColumnInfo&) const = default;
};

/// T x N monthly observations starting at `start`.
struct MonthlyPanel {
  Month start;
  Eigen::MatrixXd values;
  std::vector<ColumnInfo> columns;

  int periods() const { return static_cast<int>(values.rows()); }
  int variables() const { return static_cast<int>(values.cols()); }
  MonthRange span() const { return {start, start + (periods() - 1)}; }

  std::optional<int> find(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i].name == name) return static_cast<int>(i);
    return std::nullopt;
  }

  int surprise_count() const {
    return static_cast<int>(std::count_if(columns.begin(), columns.end(),
                                          [](const ColumnInfo& c) { return c.role == Role::surprise; }));
  }
};

/// Reads an event CSV. Rows come back sorted by date.
inline std::vector<SurpriseEvent> load_events(const std::filesystem::path& path,
                                              const EventColumns& cols = {}) {
  const auto table = csv::read_file(path);
  const std::string src = path.string();
  const auto c_date = table.require_column(cols.date, src);
  const auto c_rate = table.require_column(cols.d_rate, src);
  const auto c_stock = table.require_column(cols.d_stock, src);
  std::vector<std::pair<std::size_t, std::string>> ner_cols;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    const auto& h = table.header[i];
    if (h.size() > cols.ner_prefix.size() && h.compare(0, cols.ner_prefix.size(), cols.ner_prefix) == 0)
      ner_cols.emplace_back(i, h.substr(cols.ner_prefix.size()));
  }

  std::vector<SurpriseEvent> events;
  events.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string where = src + " line " + std::to_string(table.line_numbers[r]);
    SurpriseEvent e;
    try {
      e.date = parse_date(row[c_date]);
    } catch (const DataError& err) {
      throw DataError(where + ": " + err.what());
    }
    auto rate = csv::parse_double(row[c_rate]);
    auto stock = csv::parse_double(row[c_stock]);
    if (!rate) throw DataError(where + ": malformed " + cols.d_rate + " '" + row[c_rate] + "'");
    if (!stock) throw DataError(where + ": malformed " + cols.d_stock + " '" + row[c_stock] + "'");
    e.d_rate = *rate;
    e.d_stock = *stock;
    for (const auto& [idx, country] : ner_cols) {
      if (row[idx].empty()) continue;
      auto v = csv::parse_double(row[idx]);
      if (!v) throw DataError(where + ": malformed exchange-rate change '" + row[idx] + "' for " + country);
      e.ner_change.emplace(country, *v);
    }
    events.push_back(std::move(e));
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const SurpriseEvent& a, const SurpriseEvent& b) { return a.date < b.date; });
  for (std::size_t i = 1; i < events.size(); ++i) {
    if (events[i].date == events[i - 1].date)
      throw DataError(src + ": duplicate event date " + format_date(events[i].date));
  }
  return events;
}

/// Monthly surprise columns (d_rate, d_stock). Months with several events hold
/// their sum; months without an announcement hold exactly zero.
inline MonthlyPanel aggregate_to_monthly(const std::vector<SurpriseEvent>& events, MonthRange span) {
  if (span.size() <= 0) throw DataError("empty month range");
  MonthlyPanel panel;
  panel.start = span.first;
  panel.values = Eigen::MatrixXd::Zero(span.size(), 2);
  panel.columns = {{"d_rate", Role::surprise, Transform::level}, {"d_stock", Role::surprise, Transform::level}};
  for (const auto& e : events) {
    const Month m = Month::of(e.date);
    if (!span.contains(m))
      throw DataError("event " + format_date(e.date) + " lies outside " + span.first.str() + ".." +
                      span.last.str());
    const int t = m - span.first;
    panel.values(t, 0) += e.d_rate;
    panel.values(t, 1) += e.d_stock;
  }
  return panel;
}

namespace detail {

struct MonthlySeries {
  Month start;
  std::vector<double> values;
};

inline double apply_transform(double raw, Transform t, const std::string& name, Month m) {
  switch (t) {
    case Transform::level:
      return raw;
    case Transform::log:
    case Transform::percent:
      if (!(raw > 0.0))
        throw DataError("series '" + name + "': cannot take log of non-positive value " +
                        csv::format_double(raw) + " at " + m.str());
      return t == Transform::log ? std::log(raw) : 100.0 * std::log(raw);
  }
  return raw;
}

inline MonthlySeries read_series(const SeriesSpec& spec) {
  const auto table = csv::read_file(spec.source);
  const std::string src = spec.source.string();
  const auto c_date = table.require_column("date", src);
  const auto c_val = table.require_column(spec.column, src);
  std::map<Month, double> obs;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::string where = src + " line " + std::to_string(table.line_numbers[r]);
    Month m;
    try {
      m = parse_month(table.rows[r][c_date]);
    } catch (const DataError& err) {
      throw DataError(where + ": " + err.what());
    }
    const auto& cell = table.rows[r][c_val];
    if (cell.empty()) continue;
    auto v = csv::parse_double(cell);
    if (!v) throw DataError(where + ": malformed value '" + cell + "' in column " + spec.column);
    if (!obs.emplace(m, apply_transform(*v, spec.transform, spec.name, m)).second)
      throw DataError(where + ": duplicate month " + m.str());
  }
  if (obs.empty()) throw DataError("series '" + spec.name + "' has no observations in " + src);
  MonthlySeries s;
  s.start = obs.begin()->first;
  Month expected = s.start;
  for (const auto& [m, v] : obs) {
    if (m != expected)
      throw DataError("series '" + spec.name + "' has a gap: " + expected.str() + " is missing");
    s.values.push_back(v);
    expected = expected + 1;
  }
  return s;
}

}  // namespace detail

/// Aligns the listed series over the intersection of their spans, optionally
/// restricted to `span`. Gaps inside a series are errors; nothing is interpolated.
inline MonthlyPanel load_panel(const std::vector<SeriesSpec>& specs, std::optional<MonthRange> span = {}) {
  if (specs.empty()) throw DataError("load_panel: no series specified");
  std::set<std::string> names;
  for (const auto& s : specs)
    if (!names.insert(s.name).second) throw DataError("duplicate series name '" + s.name + "'");

  std::vector<detail::MonthlySeries> series;
  series.reserve(specs.size());
  for (const auto& s : specs) series.push_back(detail::read_series(s));

  Month first = series[0].start;
  Month last = series[0].start + (static_cast<int>(series[0].values.size()) - 1);
  for (const auto& s : series) {
    first = std::max(first, s.start);
    last = std::min(last, s.start + (static_cast<int>(s.values.size()) - 1));
  }
  if (span) {
    if (span->first < first || span->last > last)
      throw DataError("requested span " + span->first.str() + ".." + span->last.str() +
                      " is not covered by all series (common span " + first.str() + ".." + last.str() + ")");
    first = span->first;
    last = span->last;
  }
  if (last < first) throw DataError("series spans do not overlap");

  MonthlyPanel panel;
  panel.start = first;
  const int T = last - first + 1;
  panel.values.resize(T, static_cast<Eigen::Index>(specs.size()));
  for (std::size_t j = 0; j < specs.size(); ++j) {
    const int offset = first - series[j].start;
    for (int t = 0; t < T; ++t) panel.values(t, static_cast<Eigen::Index>(j)) = series[j].values[offset + t];
    panel.columns.push_back({specs[j].name, specs[j].role, specs[j].transform});
  }
  return panel;
}

/// Column-wise concatenation over the common span. Surprise columns are placed
/// first so the result is ready for the restricted VAR.
inline MonthlyPanel combine(const MonthlyPanel& a, const MonthlyPanel& b) {
  const Month first = std::max(a.start, b.start);
  const Month last = std::min(a.span().last, b.span().last);
  if (last < first) throw DataError("panels do not overlap");
  const int T = last - first + 1;
  std::vector<std::pair<const MonthlyPanel*, int>> order;
  for (const auto* p : {&a, &b})
    for (int j = 0; j < p->variables(); ++j)
      if (p->columns[j].role == Role::surprise) order.emplace_back(p, j);
  for (const auto* p : {&a, &b})
    for (int j = 0; j < p->variables(); ++j)
      if (p->columns[j].role != Role::surprise) order.emplace_back(p, j);

  MonthlyPanel out;
  out.start = first;
  out.values.resize(T, static_cast<Eigen::Index>(order.size()));
  std::set<std::string> names;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& [p, j] = order[k];
    if (!names.insert(p->columns[j].name).second)
      throw DataError("duplicate column '" + p->columns[j].name + "' when combining panels");
    out.values.col(static_cast<Eigen::Index>(k)) = p->values.col(j).segment(first - p->start, T);
    out.columns.push_back(p->columns[j]);
  }
  return out;
}

/// Writes a panel; the `#roles` and `#transforms` comment lines carry the
/// column metadata so read_panel reproduces the panel exactly.
inline void write_panel(const MonthlyPanel& panel, const std::filesystem::path& path) {
  csv::Writer w(path);
  std::string roles = "roles", transforms = "transforms";
  for (const auto& c : panel.columns) {
    roles += std::string(",") + to_string(c.role);
    transforms += std::string(",") + to_string(c.transform);
  }
  w.comment(roles);
  w.comment(transforms);
  std::vector<std::string> header{"date"};
  for (const auto& c : panel.columns) header.push_back(c.name);
  w.row(header);
  for (int t = 0; t < panel.periods(); ++t) {
    std::vector<std::string> row{(panel.start + t).str()};
    for (int j = 0; j < panel.variables(); ++j) row.push_back(csv::format_double(panel.values(t, j)));
    w.row(row);
  }
}

inline MonthlyPanel read_panel(const std::filesystem::path& path) {
  const auto table = csv::read_file(path);
  const std::string src = path.string();
  if (table.header.empty() || table.header[0] != "date") throw DataError(src + ": first column must be 'date'");
  const std::size_t n = table.header.size() - 1;
  std::vector<std::string> roles(n, "em_macro"), transforms(n, "level");
  for (const auto& c : table.comments) {
    auto fields = csv::split_line(c);
    if (fields.size() != n + 1) continue;
    if (fields[0] == "roles") roles.assign(fields.begin() + 1, fields.end());
    if (fields[0] == "transforms") transforms.assign(fields.begin() + 1, fields.end());
  }
  MonthlyPanel panel;
  panel.values.resize(static_cast<Eigen::Index>(table.rows.size()), static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j)
    panel.columns.push_back({table.header[j + 1], parse_role(roles[j]), parse_transform(transforms[j])});
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::string where = src + " line " + std::to_string(table.line_numbers[r]);
    const Month m = parse_month(table.rows[r][0]);
    if (r == 0) panel.start = m;
    else if (m != panel.start + static_cast<int>(r)) throw DataError(where + ": months are not consecutive");
    for (std::size_t j = 0; j < n; ++j) {
      auto v = csv::parse_double(table.rows[r][j + 1]);
      if (!v) throw DataError(where + ": malformed value '" + table.rows[r][j + 1] + "'");
      panel.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = *v;
    }
  }
  if (table.rows.empty()) throw DataError(src + ": panel has no rows");
  return panel;
}

}  // namespace spillover
