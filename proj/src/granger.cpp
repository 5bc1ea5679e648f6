#include "emsi/granger.hpp"

#include <algorithm>
#include <cmath>

#include "emsi/error.hpp"

namespace emsi {

std::string direction_str(Direction d) {
  switch (d) {
    case Direction::XtoY: return "x_to_y";
    case Direction::YtoX: return "y_to_x";
    case Direction::Bidirectional: return "bidirectional";
    case Direction::None: return "none";
  }
  return "?";
}

LagSelection select_lags(const std::function<OlsFit(int)>& fit_at, int k_max, int bg_lags,
                         double level) {
  if (k_max < 1) throw UsageError("select_lags: k_max must be >= 1");
  LagSelection out;
  for (int k = 1; k <= k_max; ++k) {
    const OlsFit fit = fit_at(k);
    const BgTest bg = breusch_godfrey(fit.fit, bg_lags);
    out.bg_pvalues.push_back(bg.p_value);
    if (bg.p_value > level) {
      out.k = k;
      return out;
    }
  }
  out.k = k_max;
  out.flagged = true;
  return out;
}

namespace {

// y_t = const + sum_k x_{t-k} + sum_k controls_{t-k} + sum_k y_{t-k}.
ModelSpec granger_equation(const std::string& y, const std::string& x,
                           const std::vector<std::string>& controls, int k) {
  std::vector<Term> terms;
  for (int l = 1; l <= k; ++l) terms.push_back({x, l});
  for (const auto& c : controls) {
    for (int l = 1; l <= k; ++l) terms.push_back({c, l});
  }
  for (int l = 1; l <= k; ++l) terms.push_back({y, l});
  return ModelSpec::with_constant(y, std::move(terms));
}

}  // namespace

GrangerResult granger_test(const Dataset& data, const std::string& x, const std::string& y,
                           const std::vector<std::string>& controls, int k_max) {
  if (data.rows() < 60) throw DataError("granger_test: need at least 60 aligned months");

  GrangerResult out;
  out.x = x;
  out.y = y;

  const LagSelection sel_fwd = select_lags(
      [&](int k) { return ols(granger_equation(y, x, controls, k), data); }, k_max);
  out.k_forward = sel_fwd.k;
  out.flagged_forward = sel_fwd.flagged;
  out.fit_forward = ols(granger_equation(y, x, controls, sel_fwd.k), data);
  out.x_block_forward = wald_block(out.fit_forward, out.fit_forward.block(x));

  const LagSelection sel_rev = select_lags(
      [&](int k) { return ols(granger_equation(x, y, controls, k), data); }, k_max);
  out.k_reverse = sel_rev.k;
  out.flagged_reverse = sel_rev.flagged;
  out.fit_reverse = ols(granger_equation(x, y, controls, sel_rev.k), data);
  out.y_block_reverse = wald_block(out.fit_reverse, out.fit_reverse.block(y));

  const bool fwd = out.x_block_forward.p_value < 0.05;
  const bool rev = out.y_block_reverse.p_value < 0.05;
  out.direction = fwd ? (rev ? Direction::Bidirectional : Direction::XtoY)
                      : (rev ? Direction::YtoX : Direction::None);
  return out;
}

OlsFit contemporaneous_model(const Dataset& data, const std::string& dependent,
                             const std::string& x, const std::vector<std::string>& controls,
                             int k_max) {
  auto spec_at = [&](int k) {
    std::vector<Term> terms;
    terms.push_back({x, 0});
    for (const auto& c : controls) terms.push_back({c, 0});
    for (int l = 1; l <= k; ++l) terms.push_back({dependent, l});
    return ModelSpec::with_constant(dependent, std::move(terms));
  };
  const LagSelection sel = select_lags([&](int k) { return ols(spec_at(k), data); }, k_max);
  return ols(spec_at(sel.k), data);
}

BreakResult qlr_break(const MonthlySeries& series) {
  const int n = series.size();
  if (n < 40) throw DataError("qlr_break: need at least 40 observations");

  const Eigen::Map<const Eigen::VectorXd> y(series.values.data(), n);
  const double mean = y.mean();
  const double ssr_restricted = (y.array() - mean).square().sum();

  const int lo = std::max(static_cast<int>(std::floor(0.15 * n)), 1);
  const int hi = std::min(static_cast<int>(std::ceil(0.85 * n)), n - 1);

  BreakResult out;
  out.sup_f = -1.0;
  for (int b = lo; b <= hi; ++b) {
    // Intercept-shift alternative: separate means before and after b.
    double m1 = 0.0, m2 = 0.0;
    for (int t = 0; t < b; ++t) m1 += y(t);
    for (int t = b; t < n; ++t) m2 += y(t);
    m1 /= b;
    m2 /= n - b;
    double ssr = 0.0;
    for (int t = 0; t < b; ++t) ssr += (y(t) - m1) * (y(t) - m1);
    for (int t = b; t < n; ++t) ssr += (y(t) - m2) * (y(t) - m2);
    const double f = ssr > 0.0 ? (ssr_restricted - ssr) / (ssr / (n - 2)) : 0.0;
    out.profile.emplace_back(series.month_at(b), f);
    if (f > out.sup_f) {
      out.sup_f = f;
      out.break_index = b;
      out.break_month = series.month_at(b);
    }
  }
  out.significant = out.sup_f > kSupF5Pct;
  return out;
}

MonthlySeries level_correct(const MonthlySeries& series, YearMonth break_month) {
  const int br = break_month.index() - series.start.index();
  if (br <= 0 || br >= series.size()) {
    throw DataError("level_correct: break " + break_month.str() + " outside series interior");
  }
  double pre = 0.0, post = 0.0;
  for (int t = 0; t < series.size(); ++t) {
    (t < br ? pre : post) += series.values[static_cast<size_t>(t)];
  }
  pre /= br;
  post /= series.size() - br;

  MonthlySeries out = series;
  for (int t = 0; t < br; ++t) out.values[static_cast<size_t>(t)] -= pre - post;
  return out;
}

std::vector<SignificanceCount> significance_summary(const std::vector<OlsFit>& fits,
                                                    const std::vector<std::string>& variables) {
  std::vector<SignificanceCount> out;
  for (const auto& variable : variables) {
    SignificanceCount count;
    count.variable = variable;
    for (const auto& fit : fits) {
      const auto block = fit.block(variable);
      if (block.empty()) continue;
      ++count.total;
      if (wald_block(fit, block).p_value < 0.05) ++count.significant;
    }
    out.push_back(std::move(count));
  }
  return out;
}

}  // namespace emsi
