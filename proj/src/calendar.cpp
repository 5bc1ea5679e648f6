#include "emsi/calendar.hpp"

#include <cstdio>

#include "emsi/error.hpp"

namespace emsi {

bool is_leap_year(int year) {
  return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int days_in_month(int year, int month) {
  static const int kDays[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (month == 2 && is_leap_year(year)) return 29;
  return kDays[month - 1];
}

YearMonth YearMonth::from_index(int idx) {
  int y = idx / 12;
  int m = idx % 12;
  if (m < 0) {
    m += 12;
    y -= 1;
  }
  return {y, m + 1};
}

std::string YearMonth::str() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
  return buf;
}

YearMonth YearMonth::parse(const std::string& text) {
  int y = 0, m = 0;
  char trail = 0;
  if (std::sscanf(text.c_str(), "%d-%d%c", &y, &m, &trail) != 2 || m < 1 || m > 12) {
    throw DataError("invalid month '" + text + "' (expected YYYY-MM)");
  }
  return {y, m};
}

std::string Quarter::str() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-Q%d", year, q);
  return buf;
}

Quarter Quarter::parse(const std::string& text) {
  int y = 0, qq = 0;
  char trail = 0;
  if (std::sscanf(text.c_str(), "%d-Q%d%c", &y, &qq, &trail) != 2 || qq < 1 || qq > 4) {
    throw DataError("invalid quarter '" + text + "' (expected YYYY-Qn)");
  }
  return {y, qq};
}

std::int64_t Date::serial() const {
  // Howard Hinnant's days-from-civil.
  std::int64_t y = year;
  const int m = month;
  const int d = day;
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

std::string Date::str() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
  return buf;
}

bool Date::valid(int year, int month, int day) {
  return month >= 1 && month <= 12 && day >= 1 && day <= days_in_month(year, month);
}

std::optional<Date> Date::make(int year, int month, int day) {
  if (!valid(year, month, day)) return std::nullopt;
  return Date{year, month, day};
}

std::optional<Date> Date::parse(const std::string& text) {
  int y = 0, m = 0, d = 0;
  char trail = 0;
  if (std::sscanf(text.c_str(), "%d-%d-%d%c", &y, &m, &d, &trail) != 3) return std::nullopt;
  return make(y, m, d);
}

std::string TimeOfDay::str() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%02d:%02d:%02d", hour, minute, second);
  return buf;
}

std::optional<TimeOfDay> TimeOfDay::parse(const std::string& text) {
  int h = 0, m = 0, s = 0;
  char trail = 0;
  if (std::sscanf(text.c_str(), "%d:%d:%d%c", &h, &m, &s, &trail) != 3) return std::nullopt;
  if (h < 0 || h > 23 || m < 0 || m > 59 || s < 0 || s > 60) return std::nullopt;
  return TimeOfDay{h, m, s};
}

}  // namespace emsi
