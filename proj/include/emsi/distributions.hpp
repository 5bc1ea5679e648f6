#pragma once

namespace emsi {

double normal_cdf(double x);
/// Two-sided normal p-value for a t-ratio.
double normal_pvalue(double t);

/// Upper tail P(X > x) for chi-squared with df degrees of freedom.
double chi2_sf(double x, int df);

/// CDF of the F distribution.
double f_cdf(double x, int df1, int df2);
/// Upper tail of the F distribution.
double f_sf(double x, int df1, int df2);

}  // namespace emsi
