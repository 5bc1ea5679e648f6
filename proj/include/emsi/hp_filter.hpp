#pragma once

#include <vector>

#include "emsi/series.hpp"

namespace emsi {

/// Frequency-adjusted smoothing weight for monthly data (1600 * 3^4).
inline constexpr double kHpLambdaMonthly = 129600.0;

struct HpDecomposition {
  std::vector<double> trend;
  std::vector<double> cycle;  // input - trend
};

/// Trend/cycle split minimizing sum (x_t - tau_t)^2 + lambda * sum
/// (second difference of tau)^2, solved exactly through the pentadiagonal
/// normal equations (banded LDL^T in extended precision, one refinement
/// pass). lambda = 0 returns the series itself as trend.
HpDecomposition hp_filter(const std::vector<double>& x, double lambda);

struct HpResult {
  MonthlySeries trend;
  MonthlySeries cycle;
};

HpResult hp_filter(const MonthlySeries& series, double lambda);

}  // namespace emsi
