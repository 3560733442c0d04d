#pragma once

#include <cstddef>

namespace svolt::special {

/// Lower incomplete gamma function (non-normalized), \f$\int_0^x u^{a-1}e^{-u}du\f$.
double lower_inc_gamma(double a, double x);

/// Upper incomplete gamma function (non-normalized), \f$\int_x^\infty u^{a-1}e^{-u}du\f$.
double upper_inc_gamma(double a, double x);

/// Exponential integral E1(x) for x > 0.
double expint_e1(double x);

/// Standard normal cdf.
double normal_cdf(double x);

/// cdf of the chi-square distribution with one degree of freedom.
double chi2_1_cdf(double x);

/// Asymptotic Kolmogorov distribution, P[sqrt(n) D_n <= x] as n -> inf.
double kolmogorov_cdf(double x);

/// Asymptotic p-value for a one-sample KS statistic d at sample size n.
double ks_pvalue(double d, std::size_t n);

} // namespace svolt::special
