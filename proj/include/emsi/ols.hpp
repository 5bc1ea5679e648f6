#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "emsi/dataset.hpp"

namespace emsi {

/// Least-squares fit of y on the columns of X via column-pivoted
/// Householder QR. Rank deficiency raises NumericError naming the
/// redundant columns when names are supplied.
struct LinearFit {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  Eigen::VectorXd coef;
  Eigen::VectorXd resid;
  Eigen::MatrixXd xtx_inv;  // (X'X)^-1 from the R factor
  double ssr = 0.0;
  double sst = 0.0;    // centered total sum of squares
  double sigma2 = 0.0; // ssr / dof
  int n = 0;
  int k = 0;
  int dof = 0;
  double r2 = 0.0;
  double adj_r2 = 0.0;
};

LinearFit fit_linear(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                     const std::vector<std::string>* names = nullptr);

/// Plain OLS covariance sigma^2 (X'X)^-1.
Eigen::MatrixXd ols_cov(const LinearFit& fit);

/// Newey-West bandwidth rule floor(4 (T/100)^(2/9)).
int nw_default_bandwidth(int n);

/// Bartlett-kernel HAC covariance of the coefficient estimates. Bandwidth 0
/// degenerates to the heteroskedasticity-only (White/HC0) covariance.
Eigen::MatrixXd hac_cov(const LinearFit& fit, int bandwidth);

/// One regressor: a dataset column at a lag, or the intercept ("const").
struct Term {
  std::string series;
  int lag = 0;

  std::string label() const;
  bool operator==(const Term&) const = default;
};

inline const std::string kConstName = "const";

/// Regression specification over a Dataset. The constant must appear
/// exactly once among the regressors.
struct ModelSpec {
  std::string dependent;
  std::vector<Term> regressors;

  int max_lag() const;
  static ModelSpec with_constant(std::string dependent, std::vector<Term> terms);
};

struct OlsFit {
  ModelSpec spec;
  std::vector<std::string> names;  // regressor labels, aligned with coef
  LinearFit fit;
  Eigen::MatrixXd cov_ols;
  Eigen::MatrixXd cov_hac;
  int bandwidth = 0;
  YearMonth sample_start;  // first month with all lags available

  int index_of(const std::string& label) const;  // throws DataError
  double coef(const std::string& label) const;
  double hac_se(int i) const;
  double hac_se(const std::string& label) const;
  /// Indices of all lag terms of `series` (the block tested jointly).
  std::vector<int> block(const std::string& series) const;
};

/// Fits the specification on the dataset; bandwidth < 0 selects the
/// Newey-West default rule.
OlsFit ols(const ModelSpec& spec, const Dataset& data, int bandwidth = -1);

struct WaldTest {
  double stat = 0.0;
  int df = 0;
  double p_value = 1.0;
};

/// Joint chi-squared test that the selected coefficients are all zero,
/// using the HAC covariance (or the plain one when hac = false).
WaldTest wald_block(const OlsFit& fit, const std::vector<int>& indices, bool hac = true);

struct MeanTest {
  double mean = 0.0;
  double se = 0.0;
  double t_ratio = 0.0;
  double p_value = 1.0;
  int n = 0;
};

/// Regression on a constant with HAC standard errors; bandwidth < 0 selects
/// the default rule. Zero-variance input is an error.
MeanTest mean_test(const std::vector<double>& series, int bandwidth = -1);

struct DiffMeanTest {
  double diff = 0.0;
  double se = 0.0;
  double t_ratio = 0.0;
  double p_value = 1.0;
  int n = 0;
  bool degenerate = false;  // zero-variance difference; t reported as 0
};

/// Mean of (a - b) on the overlapping months, tested like mean_test.
DiffMeanTest diff_mean_test(const MonthlySeries& a, const MonthlySeries& b);

struct VarianceTest {
  double f = 0.0;
  int df1 = 0;
  int df2 = 0;
  double p_value = 1.0;
};

/// Variance ratio s^2_a / s^2_b with a two-sided F p-value. The series must
/// overlap; each variance uses its own full sample.
VarianceTest diff_var_test(const MonthlySeries& a, const MonthlySeries& b);

struct BgTest {
  double lm = 0.0;
  int df = 0;
  double p_value = 1.0;
};

/// Breusch-Godfrey LM test: residuals regressed on the original regressors
/// plus `lags` of themselves (zero-padded), LM = n R^2 ~ chi2(lags).
BgTest breusch_godfrey(const LinearFit& fit, int lags);

/// beta / (1 - sum of AR coefficients); errors when the AR sum reaches 1.
double long_run_effect(double beta, double ar_sum);
double long_run_effect(const OlsFit& fit, const std::string& target,
                       const std::vector<std::string>& ar_labels);

}  // namespace emsi
