#include "emsi/adf.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "emsi/distributions.hpp"
#include "emsi/error.hpp"
#include "emsi/ols.hpp"

namespace emsi {

namespace {

// Response-surface coefficients for the tau distribution with a constant
// (single-variable case): probit-scale polynomials in the statistic, one
// set for the far left tail and one for the rest.
constexpr double kTauStar = -1.61;
constexpr double kTauMin = -18.83;
constexpr double kTauMax = 2.74;
constexpr double kSmallP[3] = {2.1659, 1.4412, 3.8269e-2};
constexpr double kLargeP[4] = {1.7339, 9.3202e-1, -1.2980e-1, 2.7226e-2};

struct AdfRegression {
  double stat = 0.0;
  double ssr = 0.0;
  int n = 0;
  int k = 0;
};

// Fits dx_t on [1, x_{t-1}, dx_{t-1..t-p}] with the first usable index
// `start` into the dx array (start >= p).
AdfRegression adf_regression(const std::vector<double>& x, const std::vector<double>& dx, int p,
                             int start) {
  const int n = static_cast<int>(dx.size()) - start;
  const int k = 2 + p;
  if (n <= k) throw DataError("adf_test: insufficient sample for lag " + std::to_string(p));

  Eigen::MatrixXd design(n, k);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    const int t = start + i;  // index into dx; dx[t] = x[t+1] - x[t]
    y(i) = dx[static_cast<size_t>(t)];
    design(i, 0) = 1.0;
    design(i, 1) = x[static_cast<size_t>(t)];  // x_{t-1} relative to dx_t
    for (int j = 1; j <= p; ++j) {
      design(i, 1 + j) = dx[static_cast<size_t>(t - j)];
    }
  }

  const LinearFit fit = fit_linear(design, y);
  const Eigen::MatrixXd cov = ols_cov(fit);
  AdfRegression out;
  out.stat = fit.coef(1) / std::sqrt(cov(1, 1));
  out.ssr = fit.ssr;
  out.n = n;
  out.k = k;
  return out;
}

}  // namespace

double adf_pvalue_const(double stat) {
  if (stat <= kTauMin) return 0.0;
  if (stat >= kTauMax) return 1.0;
  double z;
  if (stat <= kTauStar) {
    z = kSmallP[0] + kSmallP[1] * stat + kSmallP[2] * stat * stat;
  } else {
    z = kLargeP[0] + stat * (kLargeP[1] + stat * (kLargeP[2] + stat * kLargeP[3]));
  }
  return normal_cdf(z);
}

AdfResult adf_test(const std::vector<double>& x, int max_lag) {
  if (max_lag < 0) throw UsageError("adf_test: max_lag must be nonnegative");
  if (static_cast<int>(x.size()) < 25) throw DataError("adf_test: need at least 25 observations");

  std::vector<double> dx(x.size() - 1);
  for (size_t t = 0; t + 1 < x.size(); ++t) dx[t] = x[t + 1] - x[t];

  // Lag order by AIC, every candidate fitted on the common sample that the
  // largest order allows.
  int best_p = 0;
  double best_aic = std::numeric_limits<double>::infinity();
  for (int p = 0; p <= max_lag; ++p) {
    const AdfRegression reg = adf_regression(x, dx, p, max_lag);
    const double aic = reg.n * std::log(reg.ssr / reg.n) + 2.0 * reg.k;
    if (aic < best_aic) {
      best_aic = aic;
      best_p = p;
    }
  }

  // Final fit on the full sample available at the chosen order.
  const AdfRegression reg = adf_regression(x, dx, best_p, best_p);
  AdfResult out;
  out.statistic = reg.stat;
  out.p_value = adf_pvalue_const(reg.stat);
  out.chosen_lag = best_p;
  out.nobs = reg.n;
  return out;
}

AdfResult adf_test(const MonthlySeries& series, int max_lag) {
  return adf_test(series.values, max_lag);
}

}  // namespace emsi
