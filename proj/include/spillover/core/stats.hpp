#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "spillover/error.hpp"

namespace spillover::stats {

inline double mean(std::span<const double> x) {
  if (x.empty()) throw DataError("mean of empty sample");
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

/// Sample variance with n - 1 denominator.
inline double variance(std::span<const double> x) {
  if (x.size() < 2) throw DataError("variance needs at least 2 observations");
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

inline double sd(std::span<const double> x) { return std::sqrt(variance(x)); }

/// Quantile of an already sorted sample by linear interpolation between order
/// statistics (position (n - 1) p). Two points {0, 1} have median 0.5.
inline double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw DataError("quantile of empty sample");
  if (sorted.size() == 1) return sorted.front();
  const double pos = std::clamp(p, 0.0, 1.0) * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

inline double quantile(std::vector<double> x, double p) {
  std::sort(x.begin(), x.end());
  return quantile_sorted(x, p);
}

}  // namespace spillover::stats
