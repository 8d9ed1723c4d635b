#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace perconoise {

// Every estimator carries its uncertainty and provenance.
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  long replicates = 0;
  std::uint64_t seed = 0;
};

double mean(std::span<const double> xs);
double sample_variance(std::span<const double> xs);  // unbiased

// Wilson 95% interval for a binomial proportion.
Estimate binomial_proportion(std::uint64_t successes, std::uint64_t trials);

// Plug-in covariance mean(xy) - mean(x) mean(y) with a leave-one-block-out
// jackknife CI (95%).
Estimate paired_covariance(std::span<const double> x, std::span<const double> y,
                           int blocks = 100);

// Exact binomial pmf and tails, evaluated in extended precision.
double binomial_pmf(long long n, long long k, double p);
double binomial_cdf(int n, int k, double p);             // P(X <= k)
double binomial_tail_above(int n, double a, double p);   // P(|X - pn| > a)

// Upper regularised incomplete gamma Q(s, x); chi-square tail is
// Q(dof/2, stat/2).
double gamma_q(double s, double x);
double chi_square_tail(double stat, int dof);

// Two-sample Kolmogorov-Smirnov distance and the asymptotic critical value
// at level alpha.
double ks_distance(std::vector<double> a, std::vector<double> b);
double ks_critical(std::size_t n, std::size_t m, double alpha);

}  // namespace perconoise
