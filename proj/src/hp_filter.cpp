#include "emsi/hp_filter.hpp"

#include <cmath>

#include "emsi/error.hpp"

namespace emsi {

namespace {

// Solves (I + lambda * D'D) tau = rhs where D is the (n-2) x n second
// difference operator. The matrix is symmetric positive definite with
// bandwidth 2; we factor it as L D L^T with unit lower-triangular L.
struct PentaSolver {
  int n;
  std::vector<long double> d;   // pivot diagonal
  std::vector<long double> l1;  // L[i][i-1]
  std::vector<long double> l2;  // L[i][i-2]
  std::vector<long double> a0, a1, a2;  // matrix bands (main, +1, +2)

  PentaSolver(int n_, long double lambda) : n(n_), d(n_), l1(n_), l2(n_), a0(n_), a1(n_), a2(n_) {
    for (int i = 0; i < n; ++i) {
      long double dd = 6.0L;
      if (i == 0 || i == n - 1) dd = 1.0L;
      else if (i == 1 || i == n - 2) dd = 5.0L;
      a0[i] = 1.0L + lambda * dd;
    }
    for (int i = 0; i + 1 < n; ++i) {
      const long double o1 = (i == 0 || i == n - 2) ? -2.0L : -4.0L;
      a1[i] = lambda * o1;
    }
    for (int i = 0; i + 2 < n; ++i) a2[i] = lambda;

    d[0] = a0[0];
    l1[1] = a1[0] / d[0];
    d[1] = a0[1] - l1[1] * l1[1] * d[0];
    for (int i = 2; i < n; ++i) {
      l2[i] = a2[i - 2] / d[i - 2];
      l1[i] = (a1[i - 1] - l2[i] * l1[i - 1] * d[i - 2]) / d[i - 1];
      d[i] = a0[i] - l1[i] * l1[i] * d[i - 1] - l2[i] * l2[i] * d[i - 2];
      if (!(d[i] > 0.0L)) throw NumericError("hp_filter: factorization lost positive definiteness");
    }
  }

  std::vector<long double> solve(const std::vector<long double>& rhs) const {
    std::vector<long double> z(n);
    z[0] = rhs[0];
    z[1] = rhs[1] - l1[1] * z[0];
    for (int i = 2; i < n; ++i) z[i] = rhs[i] - l1[i] * z[i - 1] - l2[i] * z[i - 2];
    for (int i = 0; i < n; ++i) z[i] /= d[i];
    // Back substitution with L^T.
    if (n >= 2) z[n - 2] -= l1[n - 1] * z[n - 1];
    for (int i = n - 3; i >= 0; --i) z[i] -= l1[i + 1] * z[i + 1] + l2[i + 2] * z[i + 2];
    return z;
  }

  std::vector<long double> multiply(const std::vector<long double>& v) const {
    std::vector<long double> out(n);
    for (int i = 0; i < n; ++i) {
      long double acc = a0[i] * v[i];
      if (i >= 1) acc += a1[i - 1] * v[i - 1];
      if (i >= 2) acc += a2[i - 2] * v[i - 2];
      if (i + 1 < n) acc += a1[i] * v[i + 1];
      if (i + 2 < n) acc += a2[i] * v[i + 2];
      out[i] = acc;
    }
    return out;
  }
};

}  // namespace

HpDecomposition hp_filter(const std::vector<double>& x, double lambda) {
  const int n = static_cast<int>(x.size());
  if (lambda < 0.0) throw UsageError("hp_filter: lambda must be nonnegative");
  if (lambda == 0.0) {
    return {x, std::vector<double>(x.size(), 0.0)};
  }
  if (n < 4) throw DataError("hp_filter: need at least 4 observations");

  const PentaSolver solver(n, static_cast<long double>(lambda));
  std::vector<long double> rhs(x.begin(), x.end());
  std::vector<long double> tau = solver.solve(rhs);

  // One refinement step; the system is badly conditioned for very large
  // lambda (condition number grows like 16*lambda).
  const auto ax = solver.multiply(tau);
  std::vector<long double> residual(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) residual[static_cast<size_t>(i)] = rhs[static_cast<size_t>(i)] - ax[static_cast<size_t>(i)];
  const auto correction = solver.solve(residual);
  for (int i = 0; i < n; ++i) tau[static_cast<size_t>(i)] += correction[static_cast<size_t>(i)];

  HpDecomposition out;
  out.trend.resize(x.size());
  out.cycle.resize(x.size());
  for (int i = 0; i < n; ++i) {
    out.trend[static_cast<size_t>(i)] = static_cast<double>(tau[static_cast<size_t>(i)]);
    out.cycle[static_cast<size_t>(i)] = x[static_cast<size_t>(i)] - out.trend[static_cast<size_t>(i)];
  }
  return out;
}

HpResult hp_filter(const MonthlySeries& series, double lambda) {
  const HpDecomposition d = hp_filter(series.values, lambda);
  HpResult out;
  out.trend = {series.start, d.trend, series.unit};
  out.cycle = {series.start, d.cycle, series.unit};
  return out;
}

}  // namespace emsi
