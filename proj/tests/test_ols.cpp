#include <doctest.h>

#include <cmath>

#include "emsi/distributions.hpp"
#include "emsi/error.hpp"
#include "emsi/ols.hpp"
#include "emsi/rng.hpp"

using namespace emsi;

namespace {

Dataset two_columns(const std::vector<double>& x, const std::vector<double>& y) {
  return Dataset::align({{"x", {{2000, 1}, x, ""}}, {"y", {{2000, 1}, y, ""}}});
}

}  // namespace

TEST_CASE("exact linear relationship is recovered exactly") {
  std::vector<double> x, y;
  for (int t = 0; t < 50; ++t) {
    x.push_back(0.3 * t - 4.0);
    y.push_back(2.0 + 3.0 * x.back());
  }
  const OlsFit fit = ols(ModelSpec::with_constant("y", {{"x", 0}}), two_columns(x, y));
  CHECK(fit.coef(kConstName) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(fit.coef("x") == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(fit.fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("coefficients match the hand-solved 2x2 normal equations") {
  const std::vector<double> x = {1.0, 2.0, 3.0, 4.0};
  const std::vector<double> y = {2.0, 4.0, 5.0, 8.0};
  const int n = 4;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sx += x[static_cast<size_t>(i)];
    sy += y[static_cast<size_t>(i)];
    sxx += x[static_cast<size_t>(i)] * x[static_cast<size_t>(i)];
    sxy += x[static_cast<size_t>(i)] * y[static_cast<size_t>(i)];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;

  const OlsFit fit = ols(ModelSpec::with_constant("y", {{"x", 0}}), two_columns(x, y));
  CHECK(fit.coef("x") == doctest::Approx(slope).epsilon(1e-12));
  CHECK(fit.coef(kConstName) == doctest::Approx(intercept).epsilon(1e-12));
}

TEST_CASE("residuals are orthogonal to the regressors") {
  Rng rng(808);
  std::vector<double> x, y;
  for (int t = 0; t < 200; ++t) {
    x.push_back(rng.normal());
    y.push_back(1.0 + 0.5 * x.back() + rng.normal());
  }
  const OlsFit fit = ols(ModelSpec::with_constant("y", {{"x", 0}}), two_columns(x, y));
  const Eigen::VectorXd xte = fit.fit.X.transpose() * fit.fit.resid;
  const double scale = fit.fit.y.norm();
  for (int j = 0; j < xte.size(); ++j) {
    CHECK(std::abs(xte(j)) / scale < 1e-8);
  }
}

TEST_CASE("regressing y on itself gives slope one and R2 one") {
  Rng rng(123);
  std::vector<double> y;
  for (int t = 0; t < 80; ++t) y.push_back(rng.normal() * 3.0 + 1.0);
  const Dataset data = Dataset::align({{"y", {{2000, 1}, y, ""}}, {"z", {{2000, 1}, y, ""}}});
  const OlsFit fit = ols(ModelSpec::with_constant("y", {{"z", 0}}), data);
  CHECK(fit.coef("z") == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(fit.fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rank deficiency names the redundant column") {
  std::vector<double> x, y, z;
  Rng rng(5);
  for (int t = 0; t < 60; ++t) {
    x.push_back(rng.normal());
    z.push_back(2.0 * x.back());
    y.push_back(x.back() + rng.normal());
  }
  const Dataset data = Dataset::align({{"x", {{2000, 1}, x, ""}},
                                       {"z", {{2000, 1}, z, ""}},
                                       {"y", {{2000, 1}, y, ""}}});
  CHECK_THROWS_AS(ols(ModelSpec::with_constant("y", {{"x", 0}, {"z", 0}}), data), NumericError);
}

TEST_CASE("slope coverage on independent data") {
  const int reps = 200;
  int covered = 0;
  for (int rep = 0; rep < reps; ++rep) {
    Rng rng(37000 + static_cast<std::uint64_t>(rep));
    std::vector<double> x, y;
    for (int t = 0; t < 500; ++t) {
      x.push_back(rng.normal());
      y.push_back(rng.normal());
    }
    const OlsFit fit = ols(ModelSpec::with_constant("y", {{"x", 0}}), two_columns(x, y));
    const double se = std::sqrt(fit.cov_ols(fit.index_of("x"), fit.index_of("x")));
    if (std::abs(fit.coef("x")) <= 2.0 * se) ++covered;
  }
  CHECK(covered >= reps * 94 / 100);
}

TEST_CASE("bandwidth zero reduces the HAC estimator to White") {
  Rng rng(99);
  const int n = 120;
  Eigen::MatrixXd X(n, 2);
  Eigen::VectorXd y(n);
  for (int t = 0; t < n; ++t) {
    X(t, 0) = 1.0;
    X(t, 1) = rng.normal();
    y(t) = 0.5 + X(t, 1) + rng.normal() * (1.0 + 0.5 * std::abs(X(t, 1)));
  }
  const LinearFit fit = fit_linear(X, y);
  const Eigen::MatrixXd hac0 = hac_cov(fit, 0);
  // Independent White/HC0 computation.
  Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(2, 2);
  for (int t = 0; t < n; ++t) {
    meat += fit.resid(t) * fit.resid(t) * X.row(t).transpose() * X.row(t);
  }
  const Eigen::MatrixXd white = fit.xtx_inv * meat * fit.xtx_inv;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      CHECK(hac0(i, j) == doctest::Approx(white(i, j)).epsilon(1e-10));
    }
  }
}

TEST_CASE("HAC standard errors track plain ones under iid errors") {
  const int reps = 100;
  double ratio_sum = 0.0;
  for (int rep = 0; rep < reps; ++rep) {
    Rng rng(52000 + static_cast<std::uint64_t>(rep));
    std::vector<double> x, y;
    for (int t = 0; t < 300; ++t) {
      x.push_back(rng.normal());
      y.push_back(1.0 + 0.3 * x.back() + rng.normal());
    }
    const OlsFit fit = ols(ModelSpec::with_constant("y", {{"x", 0}}), two_columns(x, y));
    const int i = fit.index_of("x");
    ratio_sum += fit.hac_se(i) / std::sqrt(fit.cov_ols(i, i));
  }
  CHECK(std::abs(ratio_sum / reps - 1.0) < 0.15);
}

TEST_CASE("HAC confidence intervals outperform plain ones under AR(1) errors") {
  const int reps = 200;
  const double true_slope = 0.5;
  int hac_covered = 0, ols_covered = 0;
  for (int rep = 0; rep < reps; ++rep) {
    Rng rng(61000 + static_cast<std::uint64_t>(rep));
    const int n = 300;
    std::vector<double> x(n), y(n);
    double xs = 0.0, u = 0.0;
    for (int t = 0; t < n; ++t) {
      xs = 0.5 * xs + rng.normal();
      u = 0.8 * u + rng.normal();
      x[static_cast<size_t>(t)] = xs;
      y[static_cast<size_t>(t)] = 1.0 + true_slope * xs + u;
    }
    const OlsFit fit = ols(ModelSpec::with_constant("y", {{"x", 0}}), two_columns(x, y), 12);
    const int i = fit.index_of("x");
    const double b = fit.coef("x");
    if (std::abs(b - true_slope) <= 1.96 * fit.hac_se(i)) ++hac_covered;
    if (std::abs(b - true_slope) <= 1.96 * std::sqrt(fit.cov_ols(i, i))) ++ols_covered;
  }
  CHECK(hac_covered >= reps * 90 / 100);
  CHECK(ols_covered < reps * 85 / 100);
  CHECK(hac_covered > ols_covered);
}

TEST_CASE("HAC covariance ignores a constant shift of y") {
  Rng rng(777);
  std::vector<double> x, y, y2;
  for (int t = 0; t < 150; ++t) {
    x.push_back(rng.normal());
    y.push_back(0.7 * x.back() + rng.normal());
    y2.push_back(y.back() + 42.0);
  }
  const OlsFit a = ols(ModelSpec::with_constant("y", {{"x", 0}}), two_columns(x, y), 5);
  const OlsFit b = ols(ModelSpec::with_constant("y", {{"x", 0}}), two_columns(x, y2), 5);
  const int i = a.index_of("x");
  CHECK(a.cov_hac(i, i) == doctest::Approx(b.cov_hac(i, i)).epsilon(1e-9));
}

TEST_CASE("default bandwidth rule") {
  CHECK(nw_default_bandwidth(100) == 4);
  CHECK(nw_default_bandwidth(300) == 5);
  CHECK(nw_default_bandwidth(50) == 3);
}

TEST_CASE("mean test") {
  SUBCASE("location equivariance") {
    Rng rng(3131);
    std::vector<double> x;
    for (int t = 0; t < 200; ++t) x.push_back(rng.normal());
    const MeanTest base = mean_test(x);
    std::vector<double> shifted = x;
    for (double& v : shifted) v += 1.0;
    const MeanTest moved = mean_test(shifted);
    CHECK(moved.mean == doctest::Approx(base.mean + 1.0).epsilon(1e-12));
    CHECK(moved.se == doctest::Approx(base.se).epsilon(1e-9));
  }
  SUBCASE("zero variance is an error") {
    CHECK_THROWS_AS(mean_test(std::vector<double>(50, 3.0)), DataError);
  }
  SUBCASE("size under white noise is near nominal") {
    const int reps = 200;
    int inside = 0;
    for (int rep = 0; rep < reps; ++rep) {
      Rng rng(71000 + static_cast<std::uint64_t>(rep));
      std::vector<double> x;
      for (int t = 0; t < 300; ++t) x.push_back(rng.normal());
      if (std::abs(mean_test(x).t_ratio) < 1.96) ++inside;
    }
    CHECK(inside >= reps * 91 / 100);
    CHECK(inside <= reps * 99 / 100);
  }
}

TEST_CASE("difference tests") {
  Rng rng(888);
  std::vector<double> base;
  for (int t = 0; t < 120; ++t) base.push_back(rng.normal());
  const MonthlySeries a{{2000, 1}, base, ""};

  SUBCASE("identical series: degenerate mean diff, unit variance ratio") {
    const DiffMeanTest dm = diff_mean_test(a, a);
    CHECK(dm.degenerate);
    CHECK(dm.diff == 0.0);
    CHECK(dm.t_ratio == 0.0);
    const VarianceTest dv = diff_var_test(a, a);
    CHECK(dv.f == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(dv.p_value == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("constant offset is recovered") {
    std::vector<double> shifted = base;
    for (double& v : shifted) v += 0.08;
    const DiffMeanTest dm = diff_mean_test(MonthlySeries{{2000, 1}, shifted, ""}, a);
    CHECK(dm.diff == doctest::Approx(0.08).epsilon(1e-12));

    // On a dyadic grid the pointwise differences are bit-identical, which
    // makes the test degenerate with the offset recovered exactly.
    std::vector<double> grid_a, grid_b;
    Rng rng3(4242);
    for (int t = 0; t < 60; ++t) {
      grid_a.push_back(static_cast<double>(rng3.below(100)));
      grid_b.push_back(grid_a.back() + 0.25);
    }
    const DiffMeanTest exact = diff_mean_test(MonthlySeries{{2000, 1}, grid_b, ""},
                                              MonthlySeries{{2000, 1}, grid_a, ""});
    CHECK(exact.degenerate);
    CHECK(exact.diff == 0.25);
    CHECK(exact.t_ratio == 0.0);
  }
  SUBCASE("variance ratio detects a fourfold variance") {
    std::vector<double> wide, narrow;
    Rng rng2(999);
    for (int t = 0; t < 400; ++t) {
      narrow.push_back(rng2.normal());
      wide.push_back(2.0 * rng2.normal());
    }
    const VarianceTest dv = diff_var_test(MonthlySeries{{2000, 1}, wide, ""},
                                          MonthlySeries{{2000, 1}, narrow, ""});
    CHECK(dv.f == doctest::Approx(4.0).epsilon(0.25));
    CHECK(dv.p_value < 0.01);
  }
  SUBCASE("non-overlapping samples error") {
    const MonthlySeries later{{2030, 1}, base, ""};
    CHECK_THROWS_AS(diff_mean_test(a, later), DataError);
    CHECK_THROWS_AS(diff_var_test(a, later), DataError);
  }
}

TEST_CASE("breusch-godfrey size and power") {
  const int reps = 200;
  int size_rejections = 0, power_rejections = 0;
  for (int rep = 0; rep < reps; ++rep) {
    Rng rng(81000 + static_cast<std::uint64_t>(rep));
    const int n = 300;
    std::vector<double> x(n), clean(n), serial(n);
    double u = 0.0;
    for (int t = 0; t < n; ++t) {
      x[static_cast<size_t>(t)] = rng.normal();
      clean[static_cast<size_t>(t)] = 1.0 + 0.5 * x[static_cast<size_t>(t)] + rng.normal();
      u = 0.7 * u + rng.normal();
      serial[static_cast<size_t>(t)] = 1.0 + 0.5 * x[static_cast<size_t>(t)] + u;
    }
    const OlsFit f_clean = ols(ModelSpec::with_constant("y", {{"x", 0}}), two_columns(x, clean));
    const OlsFit f_serial = ols(ModelSpec::with_constant("y", {{"x", 0}}), two_columns(x, serial));
    if (breusch_godfrey(f_clean.fit, 12).p_value < 0.05) ++size_rejections;
    if (breusch_godfrey(f_serial.fit, 12).p_value < 0.05) ++power_rejections;
  }
  CHECK(size_rejections >= 1);
  CHECK(size_rejections <= reps / 10);
  CHECK(power_rejections >= reps * 95 / 100);
}

TEST_CASE("breusch-godfrey edge cases") {
  Eigen::MatrixXd X = Eigen::MatrixXd::Ones(3, 1);
  Eigen::VectorXd y(3);
  y << 1.0, 2.0, 4.0;
  const LinearFit fit = fit_linear(X, y);
  const BgTest bg = breusch_godfrey(fit, 1);
  CHECK(bg.df == 1);
  CHECK(bg.p_value >= 0.0);
  CHECK(bg.p_value <= 1.0);
  CHECK_THROWS_AS(breusch_godfrey(fit, 3), DataError);
  CHECK_THROWS_AS(breusch_godfrey(fit, 0), UsageError);
}

TEST_CASE("long-run effect arithmetic") {
  CHECK(long_run_effect(5.39, 0.91) == doctest::Approx(59.89).epsilon(2e-4));
  CHECK(long_run_effect(8.57, 0.90) == doctest::Approx(85.7).epsilon(2e-4));
  CHECK(long_run_effect(2.5, 0.0) == 2.5);
  CHECK_THROWS_AS(long_run_effect(1.0, 1.0), NumericError);
  CHECK_THROWS_AS(long_run_effect(1.0, 1.2), NumericError);

  // Equals the truncated geometric sum at high order.
  const double beta = 5.39, rho = 0.91;
  double truncated = 0.0;
  double power = 1.0;
  for (int j = 0; j <= 1000; ++j) {
    truncated += beta * power;
    power *= rho;
  }
  CHECK(std::abs(truncated - long_run_effect(beta, rho)) < 1e-6);
}

TEST_CASE("wald block on a forced-zero block") {
  Rng rng(2222);
  std::vector<double> x, z, y;
  for (int t = 0; t < 300; ++t) {
    x.push_back(rng.normal());
    z.push_back(rng.normal());
    y.push_back(1.0 + 2.0 * x.back() + rng.normal());
  }
  const Dataset data = Dataset::align({{"x", {{2000, 1}, x, ""}},
                                       {"z", {{2000, 1}, z, ""}},
                                       {"y", {{2000, 1}, y, ""}}});
  const OlsFit fit = ols(ModelSpec::with_constant("y", {{"x", 0}, {"z", 0}}), data);
  const WaldTest strong = wald_block(fit, fit.block("x"));
  const WaldTest weak = wald_block(fit, fit.block("z"));
  CHECK(strong.p_value < 1e-6);
  CHECK(weak.p_value > 0.01);
  CHECK(weak.df == 1);
}
