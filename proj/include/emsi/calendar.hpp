#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>

namespace emsi {

bool is_leap_year(int year);
int days_in_month(int year, int month);

/// Calendar month, the unit of every time series in this project.
/// Months are totally ordered and support integer offset arithmetic.
struct YearMonth {
  int year = 0;
  int month = 1;  // 1..12

  auto operator<=>(const YearMonth&) const = default;

  /// Months since year 0 January; the basis for offset arithmetic.
  int index() const { return year * 12 + (month - 1); }
  static YearMonth from_index(int idx);

  YearMonth plus(int months) const { return from_index(index() + months); }
  int days() const { return days_in_month(year, month); }

  std::string str() const;  // "YYYY-MM"
  static YearMonth parse(const std::string& text);
};

/// Calendar quarter for low-frequency inputs (e.g. national accounts).
struct Quarter {
  int year = 0;
  int q = 1;  // 1..4

  auto operator<=>(const Quarter&) const = default;

  int index() const { return year * 4 + (q - 1); }
  static Quarter from_index(int idx) { return {idx / 4, idx % 4 + 1}; }
  Quarter plus(int quarters) const { return from_index(index() + quarters); }

  /// Middle month of the quarter (Q1 -> Feb, Q2 -> May, ...).
  YearMonth mid_month() const { return {year, (q - 1) * 3 + 2}; }
  YearMonth first_month() const { return {year, (q - 1) * 3 + 1}; }
  YearMonth last_month() const { return {year, (q - 1) * 3 + 3}; }

  std::string str() const;  // "YYYY-Qn"
  static Quarter parse(const std::string& text);
};

/// Calendar date; validated on construction via make().
struct Date {
  int year = 0;
  int month = 1;
  int day = 1;

  auto operator<=>(const Date&) const = default;

  YearMonth year_month() const { return {year, month}; }

  /// Days since 1970-01-01 (proleptic Gregorian).
  std::int64_t serial() const;

  std::string str() const;  // "YYYY-MM-DD"

  static bool valid(int year, int month, int day);
  static std::optional<Date> make(int year, int month, int day);
  static std::optional<Date> parse(const std::string& text);  // "YYYY-MM-DD"
};

/// Optional time-of-day attached to a media item's publication date.
struct TimeOfDay {
  int hour = 0;
  int minute = 0;
  int second = 0;

  auto operator<=>(const TimeOfDay&) const = default;

  std::string str() const;  // "HH:MM:SS"
  static std::optional<TimeOfDay> parse(const std::string& text);
};

}  // namespace emsi
