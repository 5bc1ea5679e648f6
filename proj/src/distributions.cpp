#include "emsi/distributions.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/normal.hpp>

namespace emsi {

double normal_cdf(double x) {
  static const boost::math::normal_distribution<double> dist;
  return boost::math::cdf(dist, x);
}

double normal_pvalue(double t) {
  static const boost::math::normal_distribution<double> dist;
  return 2.0 * boost::math::cdf(dist, -std::abs(t));
}

double chi2_sf(double x, int df) {
  if (x <= 0.0) return 1.0;
  const boost::math::chi_squared_distribution<double> dist(df);
  return boost::math::cdf(boost::math::complement(dist, x));
}

double f_cdf(double x, int df1, int df2) {
  if (x <= 0.0) return 0.0;
  const boost::math::fisher_f_distribution<double> dist(df1, df2);
  return boost::math::cdf(dist, x);
}

double f_sf(double x, int df1, int df2) {
  if (x <= 0.0) return 1.0;
  const boost::math::fisher_f_distribution<double> dist(df1, df2);
  return boost::math::cdf(boost::math::complement(dist, x));
}

}  // namespace emsi
