#pragma once

// Stylized facts around FOMC announcements: co-movement classification,
// depreciation statistics, correlations and mean-difference tests.

#include <boost/math/distributions/students_t.hpp>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spillover/core/stats.hpp"
#include "spillover/error.hpp"
#include "spillover/ingest.hpp"

namespace spillover::eventstudy {

/// `Ambiguous` collects the measure-zero case d_rate != 0 with d_stock == 0; it
/// belongs to neither co-movement class.
enum class EventClass { NegativeComovement, PositiveComovement, NoRateResponse, Ambiguous };

inline const char* to_string(EventClass c) {
  switch (c) {
    case EventClass::NegativeComovement: return "negative_comovement";
    case EventClass::PositiveComovement: return "positive_comovement";
    case EventClass::NoRateResponse: return "no_rate_response";
    case EventClass::Ambiguous: return "ambiguous";
  }
  return "?";
}

inline EventClass classify_event(const SurpriseEvent& e) {
  if (e.d_rate == 0.0) return EventClass::NoRateResponse;
  const double prod = e.d_rate * e.d_stock;
  if (prod < 0.0) return EventClass::NegativeComovement;
  if (prod > 0.0) return EventClass::PositiveComovement;
  return EventClass::Ambiguous;
}

/// Selection of events by class; `all` keeps every event.
enum class ClassFilter { all, negative, positive, no_response };

inline bool matches(ClassFilter f, EventClass c) {
  switch (f) {
    case ClassFilter::all: return true;
    case ClassFilter::negative: return c == EventClass::NegativeComovement;
    case ClassFilter::positive: return c == EventClass::PositiveComovement;
    case ClassFilter::no_response: return c == EventClass::NoRateResponse;
  }
  return false;
}

inline const char* to_string(ClassFilter f) {
  switch (f) {
    case ClassFilter::all: return "total";
    case ClassFilter::negative: return "negative_comovement";
    case ClassFilter::positive: return "positive_comovement";
    case ClassFilter::no_response: return "no_rate_response";
  }
  return "?";
}

/// Stock-surprise sign (rows: negative, positive) by rate-surprise sign
/// (columns: negative, zero, positive). Events with a zero stock surprise are
/// counted in `stock_zero` and excluded from the cells.
struct ContingencyTable {
  std::array<std::array<int, 3>, 2> cells{};
  int stock_zero = 0;
  int ambiguous = 0;  // d_rate != 0, d_stock == 0

  int row_total(int r) const { return cells[r][0] + cells[r][1] + cells[r][2]; }
  int col_total(int c) const { return cells[0][c] + cells[1][c]; }
  int total() const { return row_total(0) + row_total(1) + stock_zero; }
  int tabulated() const { return row_total(0) + row_total(1); }

  int count(EventClass c) const {
    switch (c) {
      case EventClass::NegativeComovement: return cells[0][2] + cells[1][0];
      case EventClass::PositiveComovement: return cells[0][0] + cells[1][2];
      case EventClass::NoRateResponse: return cells[0][1] + cells[1][1] + (stock_zero - ambiguous);
      case EventClass::Ambiguous: return ambiguous;
    }
    return 0;
  }
};

inline ContingencyTable tabulate_events(const std::vector<SurpriseEvent>& events) {
  if (events.empty()) throw DataError("tabulate_events: no events");
  ContingencyTable t;
  for (const auto& e : events) {
    if (e.d_stock == 0.0) {
      ++t.stock_zero;
      if (e.d_rate != 0.0) ++t.ambiguous;
      continue;
    }
    const int row = e.d_stock < 0.0 ? 0 : 1;
    const int col = e.d_rate < 0.0 ? 0 : (e.d_rate == 0.0 ? 1 : 2);
    ++t.cells[row][col];
  }
  return t;
}

struct DepreciationStats {
  double mean = 0, p10 = 0, p25 = 0, p50 = 0, p75 = 0, p90 = 0, sd = 0;
  std::size_t n = 0;
};

/// Percentile bounds (in percent) of an optional trim, e.g. {10, 90}.
struct Trim {
  double lo = 10.0;
  double hi = 90.0;
};

/// Pooled country-by-event depreciations of the selected events.
inline std::vector<double> pooled_depreciations(const std::vector<SurpriseEvent>& events, ClassFilter filter) {
  std::vector<double> x;
  for (const auto& e : events) {
    if (!matches(filter, classify_event(e))) continue;
    for (const auto& [country, v] : e.ner_change) x.push_back(v);
  }
  return x;
}

inline DepreciationStats describe(std::vector<double> x) {
  if (x.size() < 2) throw DataError("depreciation statistics need at least 2 observations");
  std::sort(x.begin(), x.end());
  DepreciationStats s;
  s.n = x.size();
  s.mean = stats::mean(x);
  s.sd = stats::sd(x);
  s.p10 = stats::quantile_sorted(x, 0.10);
  s.p25 = stats::quantile_sorted(x, 0.25);
  s.p50 = stats::quantile_sorted(x, 0.50);
  s.p75 = stats::quantile_sorted(x, 0.75);
  s.p90 = stats::quantile_sorted(x, 0.90);
  return s;
}

/// With a trim, observations below the lower or above the upper percentile of
/// the selection are dropped before the statistics are computed.
inline DepreciationStats depreciation_stats(const std::vector<SurpriseEvent>& events, ClassFilter filter,
                                            std::optional<Trim> trim = {}) {
  auto x = pooled_depreciations(events, filter);
  if (x.empty()) throw DataError(std::string("no depreciation observations for selection ") + to_string(filter));
  if (trim) {
    if (!(0.0 <= trim->lo && trim->lo < trim->hi && trim->hi <= 100.0))
      throw DataError("trim bounds must satisfy 0 <= lo < hi <= 100");
    std::sort(x.begin(), x.end());
    const double lo = stats::quantile_sorted(x, trim->lo / 100.0);
    const double hi = stats::quantile_sorted(x, trim->hi / 100.0);
    std::erase_if(x, [&](double v) { return v < lo || v > hi; });
  }
  return describe(std::move(x));
}

/// Two-sided p-value of a Student-t statistic.
inline double two_sided_p(double t, double df) {
  if (std::isinf(t)) return 0.0;
  if (t == 0.0) return 1.0;
  boost::math::students_t dist(df);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
}

inline std::string significance_stars(double p) {
  if (p < 0.01) return "***";
  if (p < 0.05) return "**";
  if (p < 0.10) return "*";
  return "";
}

struct Correlation {
  double r = 0.0;
  double t = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
  std::string stars;
};

inline Correlation pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DataError("pearson: length mismatch");
  if (x.size() < 3) throw DataError("correlation needs at least 3 pairs");
  const double mx = stats::mean(x), my = stats::mean(y);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw DataError("correlation undefined for a constant variable");
  Correlation c;
  c.n = x.size();
  c.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double df = static_cast<double>(c.n) - 2.0;
  c.t = std::fabs(c.r) == 1.0 ? std::copysign(std::numeric_limits<double>::infinity(), c.r)
                              : c.r * std::sqrt(df / (1.0 - c.r * c.r));
  c.p_value = two_sided_p(c.t, df);
  c.stars = significance_stars(c.p_value);
  return c;
}

/// Correlation of the rate surprise with exchange-rate changes, pooled over
/// every (event, country) pair of the selection.
inline Correlation comovement_correlation(const std::vector<SurpriseEvent>& events, ClassFilter filter) {
  std::vector<double> rate, ner;
  for (const auto& e : events) {
    if (!matches(filter, classify_event(e))) continue;
    for (const auto& [country, v] : e.ner_change) {
      rate.push_back(e.d_rate);
      ner.push_back(v);
    }
  }
  return pearson(rate, ner);
}

struct TTest {
  double t = 0.0;
  double df = 0.0;
  double p_value = 1.0;
  double mean_a = 0.0;
  double mean_b = 0.0;
};

/// Welch two-sample t-test (unequal variances).
inline TTest mean_diff_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw DataError("mean_diff_test: each sample needs at least 2 observations");
  TTest r;
  r.mean_a = stats::mean(a);
  r.mean_b = stats::mean(b);
  const double va = stats::variance(a) / static_cast<double>(a.size());
  const double vb = stats::variance(b) / static_cast<double>(b.size());
  const double diff = r.mean_a - r.mean_b;
  const double se2 = va + vb;
  if (se2 == 0.0) {
    r.df = static_cast<double>(a.size() + b.size() - 2);
    if (diff == 0.0) return r;
    r.t = std::copysign(std::numeric_limits<double>::infinity(), diff);
    r.p_value = 0.0;
    return r;
  }
  r.t = diff / std::sqrt(se2);
  r.df = se2 * se2 /
         (va * va / static_cast<double>(a.size() - 1) + vb * vb / static_cast<double>(b.size() - 1));
  r.p_value = two_sided_p(r.t, r.df);
  return r;
}

}  // namespace spillover::eventstudy
