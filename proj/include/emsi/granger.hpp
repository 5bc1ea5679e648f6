#pragma once

#include <functional>
#include <string>
#include <vector>

#include "emsi/ols.hpp"

namespace emsi {

struct LagSelection {
  int k = 0;
  bool flagged = false;  // no depth passed the autocorrelation screen
  std::vector<double> bg_pvalues;  // one per candidate depth 1..k_max
};

/// Smallest lag depth in 1..k_max whose fit shows no residual
/// autocorrelation (Breusch-Godfrey with `bg_lags` lags at `level`);
/// falls back to k_max with the flag set when none passes.
LagSelection select_lags(const std::function<OlsFit(int)>& fit_at, int k_max, int bg_lags = 12,
                         double level = 0.05);

enum class Direction { XtoY, YtoX, Bidirectional, None };
std::string direction_str(Direction d);

struct GrangerResult {
  std::string x, y;
  Direction direction = Direction::None;
  // The "forward" equation regresses y on lags of x, controls and y itself;
  // the "reverse" equation swaps x and y.
  int k_forward = 0, k_reverse = 0;
  bool flagged_forward = false, flagged_reverse = false;
  WaldTest x_block_forward;  // lags of x in the y equation
  WaldTest y_block_reverse;  // lags of y in the x equation
  OlsFit fit_forward, fit_reverse;
};

/// Two-equation Granger test with per-equation lag selection and joint HAC
/// Wald tests on the candidate causal blocks; direction resolved at the 5%
/// level.
GrangerResult granger_test(const Dataset& data, const std::string& x, const std::string& y,
                           const std::vector<std::string>& controls, int k_max);

/// Regression of `dependent` on contemporaneous `x` and controls plus
/// selected own lags; used to probe within-month association.
OlsFit contemporaneous_model(const Dataset& data, const std::string& dependent,
                             const std::string& x, const std::vector<std::string>& controls,
                             int k_max);

/// Andrews sup-F 5% critical value, one restriction, 15% trimming.
inline constexpr double kSupF5Pct = 8.68;

struct BreakResult {
  YearMonth break_month;
  int break_index = 0;
  double sup_f = 0.0;
  bool significant = false;
  std::vector<std::pair<YearMonth, double>> profile;
};

/// Sup-F (QLR) test for a single intercept shift with 15% trimming.
BreakResult qlr_break(const MonthlySeries& series);

/// Shifts the pre-break segment so both regime means equal the post-break
/// level.
MonthlySeries level_correct(const MonthlySeries& series, YearMonth break_month);

struct SignificanceCount {
  std::string variable;
  int significant = 0;
  int total = 0;  // fits in which the variable appears
};

/// Per variable, the number of fits whose lag block for that variable is
/// jointly significant at 5% (HAC Wald). Fits without the variable do not
/// count toward its total.
std::vector<SignificanceCount> significance_summary(const std::vector<OlsFit>& fits,
                                                    const std::vector<std::string>& variables);

}  // namespace emsi
