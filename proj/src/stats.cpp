#include "perconoise/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace perconoise {

double mean(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size() - 1);
}

Estimate binomial_proportion(std::uint64_t successes, std::uint64_t trials) {
  if (trials == 0) throw std::invalid_argument("binomial_proportion: no trials");
  const double z = 1.959963984540054;  // 97.5% normal quantile
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double denom = 1.0 + z * z / n;
  const double centre = (phat + z * z / (2 * n)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / n + z * z / (4 * n * n)) / denom;
  Estimate e;
  e.value = phat;
  e.std_error = std::sqrt(std::max(phat * (1.0 - phat), 1e-12) / n);
  e.ci_lo = std::max(0.0, centre - half);
  e.ci_hi = std::min(1.0, centre + half);
  e.replicates = static_cast<long>(trials);
  return e;
}

Estimate paired_covariance(std::span<const double> x, std::span<const double> y, int blocks) {
  if (x.size() != y.size() || x.size() < 4)
    throw std::invalid_argument("paired_covariance: need matched samples, at least 4");
  const std::size_t n = x.size();
  blocks = static_cast<int>(std::min<std::size_t>(blocks, n));

  double sx = 0, sy = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxy += x[i] * y[i];
  }
  const double nn = static_cast<double>(n);
  const double theta = sxy / nn - (sx / nn) * (sy / nn);

  // Leave-one-block-out estimates of the plug-in statistic.
  std::vector<double> loo(blocks);
  for (int b = 0; b < blocks; ++b) {
    double bx = 0, by = 0, bxy = 0;
    std::size_t bn = 0;
    for (std::size_t i = b; i < n; i += blocks) {
      bx += x[i];
      by += y[i];
      bxy += x[i] * y[i];
      ++bn;
    }
    const double rn = nn - static_cast<double>(bn);
    loo[b] = (sxy - bxy) / rn - ((sx - bx) / rn) * ((sy - by) / rn);
  }
  const double lm = mean(loo);
  double jk = 0.0;
  for (double v : loo) jk += (v - lm) * (v - lm);
  const double var = (blocks - 1) / static_cast<double>(blocks) * jk;

  Estimate e;
  e.value = theta;
  e.std_error = std::sqrt(var);
  e.ci_lo = theta - 1.959963984540054 * e.std_error;
  e.ci_hi = theta + 1.959963984540054 * e.std_error;
  e.replicates = static_cast<long>(n);
  return e;
}

namespace {

long double log_choose(long long n, long long k) {
  return std::lgammal(n + 1.0L) - std::lgammal(k + 1.0L) - std::lgammal(n - k + 1.0L);
}

}  // namespace

double binomial_pmf(long long n, long long k, double p) {
  if (k < 0 || k > n) return 0.0;
  if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return k == n ? 1.0 : 0.0;
  const long double lp = std::log(static_cast<long double>(p));
  const long double lq = std::log1p(static_cast<long double>(-p));
  return static_cast<double>(std::exp(log_choose(n, k) + k * lp + (n - k) * lq));
}

double binomial_cdf(int n, int k, double p) {
  if (k < 0) return 0.0;
  if (k >= n) return 1.0;
  long double s = 0.0L;
  for (int i = 0; i <= k; ++i) s += binomial_pmf(n, i, p);
  return static_cast<double>(std::min(s, 1.0L));
}

double binomial_tail_above(int n, double a, double p) {
  const double pn = p * n;
  long double s = 0.0L;
  for (int k = 0; k <= n; ++k)
    if (std::abs(k - pn) > a) s += binomial_pmf(n, k, p);
  return static_cast<double>(std::min(s, 1.0L));
}

namespace {

// Lower incomplete gamma by series, upper by continued fraction
// (standard Lentz evaluation).
double gamma_p_series(double s, double x) {
  double sum = 1.0 / s, term = sum;
  for (int k = 1; k < 10000; ++k) {
    term *= x / (s + k);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

double gamma_q_cf(double s, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - s, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x + s * std::log(x) - std::lgamma(s)) * h;
}

}  // namespace

double gamma_q(double s, double x) {
  if (x < 0.0 || s <= 0.0) throw std::invalid_argument("gamma_q: bad arguments");
  if (x == 0.0) return 1.0;
  if (x < s + 1.0) return 1.0 - gamma_p_series(s, x);
  return gamma_q_cf(s, x);
}

double chi_square_tail(double stat, int dof) { return gamma_q(dof / 2.0, stat / 2.0); }

double ks_distance(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  return d;
}

double ks_critical(std::size_t n, std::size_t m, double alpha) {
  const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
  return c * std::sqrt((static_cast<double>(n) + m) / (static_cast<double>(n) * m));
}

}  // namespace perconoise
