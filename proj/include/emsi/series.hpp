#pragma once

#include <optional>
#include <string>
#include <vector>

#include "emsi/calendar.hpp"

namespace emsi {

/// Contiguous monthly numeric series. `unit` is a free-form annotation
/// ("percent", "index", "ratio") carried through transforms where it makes
/// sense and replaced where it does not.
struct MonthlySeries {
  YearMonth start;
  std::vector<double> values;
  std::string unit;

  int size() const { return static_cast<int>(values.size()); }
  bool empty() const { return values.empty(); }
  YearMonth month_at(int i) const { return start.plus(i); }
  YearMonth last_month() const { return start.plus(size() - 1); }
  /// Offset of `m` within the series, or nullopt when out of range.
  std::optional<int> offset(YearMonth m) const;
  double at(YearMonth m) const;  // throws DataError when out of range

  std::string to_csv() const;  // (period, value)
  static MonthlySeries from_csv(const std::string& content,
                                const std::string& origin = "series.csv");
};

struct QuarterlySeries {
  Quarter start;
  std::vector<double> values;

  int size() const { return static_cast<int>(values.size()); }
  Quarter quarter_at(int i) const { return start.plus(i); }

  static QuarterlySeries from_csv(const std::string& content,
                                  const std::string& origin = "series.csv");
};

/// One month of survey responses on the A1 (much worse) .. A5 (much
/// better) scale plus A6 (don't know).
struct SurveyWave {
  YearMonth month;
  int a1 = 0, a2 = 0, a3 = 0, a4 = 0, a5 = 0, a6 = 0;
  int total = 0;
};

std::vector<SurveyWave> waves_from_csv(const std::string& content,
                                       const std::string& origin = "waves.csv");

/// Net balance in percentage points of respondents:
/// 100 * (A4 + A5 - A1 - A2) / total.
MonthlySeries survey_balance(const std::vector<SurveyWave>& waves);

/// Quarterly-to-monthly interpolation: each quarterly value anchors at the
/// quarter's middle month, months between anchors are linear, and the
/// leading/trailing months extend the nearest anchor flat.
MonthlySeries interpolate_q_to_m(const QuarterlySeries& series);

/// 100 * (x_t / x_{t-12} - 1); the first year of observations is consumed.
MonthlySeries yoy_pct_change(const MonthlySeries& series);

/// nominal_t / cpi_t * 100 on exactly aligned ranges.
MonthlySeries deflate(const MonthlySeries& nominal, const MonthlySeries& cpi);

/// Removes separate means before and after `break_month` (the break month
/// itself starts the second regime).
MonthlySeries regime_demean(const MonthlySeries& series, YearMonth break_month);

/// Centered moving average for an even window w: half weights on the two
/// end terms, divided by w (window 12 gives the standard 2x12 MA).
/// The result loses w/2 months at each end.
MonthlySeries centered_ma(const MonthlySeries& series, int window);

}  // namespace emsi
