#include "emsi/ols.hpp"

#include <algorithm>
#include <cmath>

#include "emsi/distributions.hpp"
#include "emsi/error.hpp"

namespace emsi {

LinearFit fit_linear(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                     const std::vector<std::string>* names) {
  const int n = static_cast<int>(X.rows());
  const int k = static_cast<int>(X.cols());
  if (y.size() != n) throw DataError("fit_linear: X and y row counts differ");
  if (n <= k) throw DataError("fit_linear: more regressors than observations");

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(1e-10);
  if (qr.rank() < k) {
    std::string msg = "fit_linear: design matrix is rank deficient";
    if (names) {
      const auto perm = qr.colsPermutation().indices();
      msg += " (redundant:";
      for (int i = qr.rank(); i < k; ++i) {
        msg += " " + (*names)[static_cast<size_t>(perm[i])];
      }
      msg += ")";
    }
    throw NumericError(msg);
  }

  LinearFit fit;
  fit.X = X;
  fit.y = y;
  fit.n = n;
  fit.k = k;
  fit.dof = n - k;
  fit.coef = qr.solve(y);
  fit.resid = y - X * fit.coef;
  fit.ssr = fit.resid.squaredNorm();
  fit.sigma2 = fit.ssr / fit.dof;

  // (X'X)^-1 = P R^-1 R^-T P' from the pivoted factorization.
  const Eigen::MatrixXd R =
      qr.matrixQR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd r_inv =
      R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
  const Eigen::MatrixXd m = r_inv * r_inv.transpose();
  const auto perm = qr.colsPermutation();
  fit.xtx_inv = perm * m * perm.transpose();

  const double mean_y = y.mean();
  fit.sst = (y.array() - mean_y).square().sum();
  fit.r2 = fit.sst > 0.0 ? 1.0 - fit.ssr / fit.sst : 1.0;
  fit.adj_r2 = fit.dof > 0 ? 1.0 - (1.0 - fit.r2) * (n - 1) / fit.dof : fit.r2;
  return fit;
}

Eigen::MatrixXd ols_cov(const LinearFit& fit) { return fit.sigma2 * fit.xtx_inv; }

int nw_default_bandwidth(int n) {
  return static_cast<int>(std::floor(4.0 * std::pow(n / 100.0, 2.0 / 9.0)));
}

Eigen::MatrixXd hac_cov(const LinearFit& fit, int bandwidth) {
  if (bandwidth < 0) throw UsageError("hac_cov: bandwidth must be nonnegative");
  const int n = fit.n;

  // Moment conditions g_t = x_t e_t.
  Eigen::MatrixXd g = fit.X.array().colwise() * fit.resid.array();

  Eigen::MatrixXd s = g.transpose() * g;
  for (int lag = 1; lag <= bandwidth && lag < n; ++lag) {
    const double w = 1.0 - static_cast<double>(lag) / (bandwidth + 1);
    const Eigen::MatrixXd gamma =
        g.bottomRows(n - lag).transpose() * g.topRows(n - lag);
    s += w * (gamma + gamma.transpose());
  }

  Eigen::MatrixXd cov = fit.xtx_inv * s * fit.xtx_inv;
  cov = 0.5 * (cov + cov.transpose()).eval();
  return cov;
}

std::string Term::label() const {
  if (series == kConstName) return kConstName;
  if (lag == 0) return series;
  return series + "(-" + std::to_string(lag) + ")";
}

int ModelSpec::max_lag() const {
  int m = 0;
  for (const auto& t : regressors) m = std::max(m, t.lag);
  return m;
}

ModelSpec ModelSpec::with_constant(std::string dependent, std::vector<Term> terms) {
  ModelSpec spec;
  spec.dependent = std::move(dependent);
  spec.regressors.push_back({kConstName, 0});
  for (auto& t : terms) spec.regressors.push_back(std::move(t));
  return spec;
}

int OlsFit::index_of(const std::string& label) const {
  for (size_t i = 0; i < names.size(); ++i) {
    if (names[i] == label) return static_cast<int>(i);
  }
  throw DataError("ols fit: no regressor labelled '" + label + "'");
}

double OlsFit::coef(const std::string& label) const { return fit.coef(index_of(label)); }

double OlsFit::hac_se(int i) const { return std::sqrt(cov_hac(i, i)); }

double OlsFit::hac_se(const std::string& label) const { return hac_se(index_of(label)); }

std::vector<int> OlsFit::block(const std::string& series) const {
  std::vector<int> idx;
  for (size_t i = 0; i < spec.regressors.size(); ++i) {
    if (spec.regressors[i].series == series) idx.push_back(static_cast<int>(i));
  }
  return idx;
}

OlsFit ols(const ModelSpec& spec, const Dataset& data, int bandwidth) {
  int n_const = 0;
  for (const auto& t : spec.regressors) {
    if (t.series == kConstName) ++n_const;
    if (t.lag < 0) throw UsageError("ols: negative lag on " + t.series);
  }
  if (n_const != 1) throw UsageError("ols: the constant must appear exactly once");

  const int max_lag = spec.max_lag();
  const int T = data.rows();
  const int n = T - max_lag;
  const int k = static_cast<int>(spec.regressors.size());
  if (n <= k) throw DataError("ols: insufficient sample for lag depth " + std::to_string(max_lag));

  Eigen::MatrixXd X(n, k);
  Eigen::VectorXd y(n);
  const auto& dep = data.values(spec.dependent);
  for (int t = 0; t < n; ++t) {
    y(t) = dep[static_cast<size_t>(t + max_lag)];
    for (int j = 0; j < k; ++j) {
      const Term& term = spec.regressors[static_cast<size_t>(j)];
      X(t, j) = term.series == kConstName
                    ? 1.0
                    : data.values(term.series)[static_cast<size_t>(t + max_lag - term.lag)];
    }
  }

  OlsFit out;
  out.spec = spec;
  for (const auto& t : spec.regressors) out.names.push_back(t.label());
  out.fit = fit_linear(X, y, &out.names);
  out.cov_ols = ols_cov(out.fit);
  out.bandwidth = bandwidth < 0 ? nw_default_bandwidth(n) : bandwidth;
  out.cov_hac = hac_cov(out.fit, out.bandwidth);
  out.sample_start = data.month_at(max_lag);
  return out;
}

WaldTest wald_block(const OlsFit& fit, const std::vector<int>& indices, bool hac) {
  if (indices.empty()) throw UsageError("wald_block: empty coefficient block");
  const int q = static_cast<int>(indices.size());
  Eigen::VectorXd b(q);
  Eigen::MatrixXd v(q, q);
  const Eigen::MatrixXd& cov = hac ? fit.cov_hac : fit.cov_ols;
  for (int i = 0; i < q; ++i) {
    b(i) = fit.fit.coef(indices[static_cast<size_t>(i)]);
    for (int j = 0; j < q; ++j) {
      v(i, j) = cov(indices[static_cast<size_t>(i)], indices[static_cast<size_t>(j)]);
    }
  }
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(v);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
    throw NumericError("wald_block: covariance block is not positive definite");
  }
  WaldTest test;
  test.stat = b.dot(ldlt.solve(b));
  test.df = q;
  test.p_value = chi2_sf(test.stat, q);
  return test;
}

MeanTest mean_test(const std::vector<double>& series, int bandwidth) {
  const int n = static_cast<int>(series.size());
  if (n < 2) throw DataError("mean_test: series too short");
  const Eigen::Map<const Eigen::VectorXd> y(series.data(), n);
  const double mean = y.mean();
  const double var = (y.array() - mean).square().sum();
  if (var == 0.0) throw DataError("mean_test: zero-variance series, no inference possible");

  const LinearFit fit = fit_linear(Eigen::MatrixXd::Ones(n, 1), y);
  const int bw = bandwidth < 0 ? nw_default_bandwidth(n) : bandwidth;
  const Eigen::MatrixXd cov = hac_cov(fit, bw);

  MeanTest out;
  out.n = n;
  out.mean = fit.coef(0);
  out.se = std::sqrt(cov(0, 0));
  out.t_ratio = out.mean / out.se;
  out.p_value = normal_pvalue(out.t_ratio);
  return out;
}

namespace {

// Overlapping months of two series; errors when they share none.
std::pair<int, int> overlap(const MonthlySeries& a, const MonthlySeries& b) {
  const int lo = std::max(a.start.index(), b.start.index());
  const int hi = std::min(a.last_month().index(), b.last_month().index());
  if (hi < lo) throw DataError("series samples do not overlap");
  return {lo, hi};
}

double sample_variance(const std::vector<double>& v) {
  const int n = static_cast<int>(v.size());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= n;
  double acc = 0.0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return acc / (n - 1);
}

}  // namespace

DiffMeanTest diff_mean_test(const MonthlySeries& a, const MonthlySeries& b) {
  const auto [lo, hi] = overlap(a, b);
  std::vector<double> diff;
  diff.reserve(static_cast<size_t>(hi - lo + 1));
  for (int idx = lo; idx <= hi; ++idx) {
    const YearMonth m = YearMonth::from_index(idx);
    diff.push_back(a.at(m) - b.at(m));
  }

  DiffMeanTest out;
  out.n = static_cast<int>(diff.size());
  double mean = 0.0;
  for (double d : diff) mean += d;
  mean /= out.n;
  out.diff = mean;

  bool constant = true;
  for (double d : diff) {
    if (d != diff.front()) {
      constant = false;
      break;
    }
  }
  if (constant) {
    out.degenerate = true;
    out.se = 0.0;
    out.t_ratio = 0.0;
    out.p_value = 1.0;
    return out;
  }

  const MeanTest mt = mean_test(diff);
  out.se = mt.se;
  out.t_ratio = mt.t_ratio;
  out.p_value = mt.p_value;
  return out;
}

VarianceTest diff_var_test(const MonthlySeries& a, const MonthlySeries& b) {
  overlap(a, b);  // overlapping ranges are required even though each
                  // variance uses its own sample
  if (a.size() < 2 || b.size() < 2) throw DataError("diff_var_test: series too short");
  const double va = sample_variance(a.values);
  const double vb = sample_variance(b.values);
  if (vb == 0.0) throw DataError("diff_var_test: zero variance in denominator series");

  VarianceTest out;
  out.f = va / vb;
  out.df1 = a.size() - 1;
  out.df2 = b.size() - 1;
  const double lower = f_cdf(out.f, out.df1, out.df2);
  const double upper = f_sf(out.f, out.df1, out.df2);
  out.p_value = std::min(1.0, 2.0 * std::min(lower, upper));
  return out;
}

BgTest breusch_godfrey(const LinearFit& fit, int lags) {
  if (lags < 1) throw UsageError("breusch_godfrey: lags must be >= 1");
  if (lags >= fit.n) throw DataError("breusch_godfrey: lags >= sample size");

  const int n = fit.n;
  Eigen::MatrixXd aux(n, fit.k + lags);
  aux.leftCols(fit.k) = fit.X;
  for (int l = 1; l <= lags; ++l) {
    for (int t = 0; t < n; ++t) {
      aux(t, fit.k + l - 1) = t - l >= 0 ? fit.resid(t - l) : 0.0;  // zero-padded
    }
  }

  const LinearFit aux_fit = fit_linear(aux, fit.resid);
  BgTest out;
  out.df = lags;
  out.lm = n * aux_fit.r2;
  out.p_value = chi2_sf(out.lm, lags);
  return out;
}

double long_run_effect(double beta, double ar_sum) {
  if (ar_sum >= 1.0) {
    throw NumericError("long_run_effect: AR coefficients sum to " + std::to_string(ar_sum) +
                       " >= 1, long-run effect undefined");
  }
  return beta / (1.0 - ar_sum);
}

double long_run_effect(const OlsFit& fit, const std::string& target,
                       const std::vector<std::string>& ar_labels) {
  double ar_sum = 0.0;
  for (const auto& label : ar_labels) ar_sum += fit.coef(label);
  return long_run_effect(fit.coef(target), ar_sum);
}

}  // namespace emsi
