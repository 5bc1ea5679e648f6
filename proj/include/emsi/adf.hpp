#pragma once

#include <vector>

#include "emsi/series.hpp"

namespace emsi {

struct AdfResult {
  double statistic = 0.0;
  double p_value = 1.0;
  int chosen_lag = 0;
  int nobs = 0;  // observations in the final regression
};

/// Augmented Dickey-Fuller test with a constant:
///   dx_t = mu + gamma x_{t-1} + sum_j delta_j dx_{t-j} + e_t.
/// The augmentation order is chosen by AIC over 0..max_lag on a common
/// sample, the statistic is the t-ratio on gamma, and the p-value comes
/// from a response-surface fit of the constant-case tau distribution.
AdfResult adf_test(const std::vector<double>& x, int max_lag);
AdfResult adf_test(const MonthlySeries& series, int max_lag);

/// Asymptotic p-value of an ADF tau statistic (regression with constant).
double adf_pvalue_const(double stat);

}  // namespace emsi
