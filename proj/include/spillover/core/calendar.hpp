#pragma once

#include <chrono>
#include <compare>
#include <cstdio>
#include <string>
#include <string_view>

#include "spillover/error.hpp"

namespace spillover {

using Date = std::chrono::year_month_day;

/// Calendar month stored as a single ordinal (year * 12 + month - 1).
class Month {
 public:
  constexpr Month() = default;
  constexpr Month(int year, int month) : ordinal_(year * 12 + (month - 1)) {}

  static constexpr Month from_ordinal(int ordinal) {
    Month m;
    m.ordinal_ = ordinal;
    return m;
  }
  static Month of(const Date& d) {
    return Month(static_cast<int>(d.year()), static_cast<int>(static_cast<unsigned>(d.month())));
  }

  constexpr int year() const { return ordinal_ >= 0 ? ordinal_ / 12 : -((-ordinal_ + 11) / 12); }
  constexpr int month() const { return ordinal_ - year() * 12 + 1; }
  constexpr int ordinal() const { return ordinal_; }

  constexpr Month operator+(int n) const { return from_ordinal(ordinal_ + n); }
  constexpr int operator-(const Month& other) const { return ordinal_ - other.ordinal_; }
  constexpr auto operator<=>(const Month&) const = default;

  std::string str() const {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02d", year(), month());
    return buf;
  }

 private:
  int ordinal_ = 0;
};

/// Inclusive month range.
struct MonthRange {
  Month first;
  Month last;

  int size() const { return last - first + 1; }
  bool contains(Month m) const { return first <= m && m <= last; }
};

namespace detail {

inline bool parse_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  int v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  out = v;
  return true;
}

}  // namespace detail

/// Parses an ISO `YYYY-MM-DD` date; throws DataError on malformed input.
inline Date parse_date(std::string_view s) {
  int y = 0, m = 0, d = 0;
  if (s.size() != 10 || s[4] != '-' || s[7] != '-' || !detail::parse_int(s.substr(0, 4), y) ||
      !detail::parse_int(s.substr(5, 2), m) || !detail::parse_int(s.substr(8, 2), d)) {
    throw DataError("malformed date '" + std::string(s) + "' (expected YYYY-MM-DD)");
  }
  Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
            std::chrono::day{static_cast<unsigned>(d)}};
  if (!date.ok()) throw DataError("invalid calendar date '" + std::string(s) + "'");
  return date;
}

/// Parses `YYYY-MM`; throws DataError on malformed input.
inline Month parse_month(std::string_view s) {
  int y = 0, m = 0;
  if (s.size() != 7 || s[4] != '-' || !detail::parse_int(s.substr(0, 4), y) ||
      !detail::parse_int(s.substr(5, 2), m) || m < 1 || m > 12) {
    throw DataError("malformed month '" + std::string(s) + "' (expected YYYY-MM)");
  }
  return Month(y, m);
}

inline std::string format_date(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

}  // namespace spillover
