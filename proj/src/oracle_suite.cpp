#include "perconoise/oracle_suite.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "perconoise/discretize.hpp"
#include "perconoise/flood.hpp"
#include "perconoise/fourier.hpp"
#include "perconoise/hypergraph.hpp"
#include "perconoise/noise.hpp"
#include "perconoise/random_instances.hpp"
#include "perconoise/sampling.hpp"
#include "perconoise/stats.hpp"

namespace perconoise {

namespace {

constexpr std::uint64_t kSuiteSeed = 0x5EEDBA5EULL;

struct Check {
  std::string name;
  std::function<bool(std::string&)> fn;
};

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// --- fourier ---------------------------------------------------------------

bool check_orthonormality(std::string& detail) {
  for (double p : {0.1, 0.3, 0.5, 0.7}) {
    const int n = 4;
    const auto size = std::size_t{1} << n;
    std::vector<double> w(size);
    for (std::size_t omega = 0; omega < size; ++omega)
      w[omega] = std::pow(p, std::popcount(omega)) * std::pow(1.0 - p, n - std::popcount(omega));
    for (std::uint32_t S = 0; S < size; ++S) {
      for (std::uint32_t T = 0; T < size; ++T) {
        double dot = 0.0;
        for (std::uint32_t omega = 0; omega < size; ++omega)
          dot += w[omega] * chi(S, omega, p) * chi(T, omega, p);
        const double want = S == T ? 1.0 : 0.0;
        if (!close(dot, want, 1e-12)) {
          detail = "p=" + num(p) + " S=" + num(S) + " T=" + num(T) + " dot=" + num(dot);
          return false;
        }
      }
    }
  }
  return true;
}

bool check_parseval_reconstruction(std::string& detail) {
  RngStream rng(kSuiteSeed, 1);
  for (int rep = 0; rep < 12; ++rep) {
    const int n = 3 + static_cast<int>(rng.next_u64() % 6);  // 3..8
    const double p = 0.1 + 0.8 * rng.next_unit();
    const BooleanFn f = make_random_fn(n, p, rng);
    const Spectrum spec = spectrum(f);

    double parseval = 0.0;
    for (double c : spec.coef) parseval += c * c;
    if (!close(parseval, f.mean_square(), 1e-10)) {
      detail = "parseval n=" + num(n) + " p=" + num(p);
      return false;
    }
    const BooleanFn back = reconstruct_all(spec);
    for (std::uint32_t omega = 0; omega < f.table_size(); ++omega)
      if (!close(back(omega), f(omega), 1e-10)) {
        detail = "reconstruct n=" + num(n) + " omega=" + num(omega);
        return false;
      }
    // Spot-check the single-point evaluation too.
    const std::uint32_t probe = static_cast<std::uint32_t>(rng.next_u64() % f.table_size());
    if (!close(reconstruct(spec, probe), f(probe), 1e-10)) {
      detail = "reconstruct point n=" + num(n);
      return false;
    }
  }
  return true;
}

bool check_noise_correlation_identity(std::string& detail) {
  RngStream rng(kSuiteSeed, 2);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 7);
    const double p = 0.1 + 0.8 * rng.next_unit();
    const double eps = rng.next_unit();
    const BooleanFn f = make_random_fn(n, p, rng);
    const NoiseCorrelation nc = noise_correlation_exact(f, eps);
    if (!close(nc.spectral, nc.direct, 1e-10)) {
      detail = "n=" + num(n) + " p=" + num(p) + " eps=" + num(eps) +
               " spectral=" + num(nc.spectral) + " direct=" + num(nc.direct);
      return false;
    }
  }
  // Brute-force third route over all re-randomisation patterns, small n.
  RngStream rng2(kSuiteSeed, 3);
  for (int rep = 0; rep < 4; ++rep) {
    const int n = 2 + static_cast<int>(rng2.next_u64() % 3);  // 2..4
    const double p = 0.2 + 0.6 * rng2.next_unit();
    const double eps = rng2.next_unit();
    const BooleanFn f = make_random_fn(n, p, rng2);
    const std::uint32_t size = 1u << n;
    long double corr = 0.0L, mean = 0.0L;
    for (std::uint32_t omega = 0; omega < size; ++omega) {
      const double pw =
          std::pow(p, std::popcount(omega)) * std::pow(1.0 - p, n - std::popcount(omega));
      mean += pw * f(omega);
      for (std::uint32_t pattern = 0; pattern < size; ++pattern) {
        const double patw = std::pow(eps, std::popcount(pattern)) *
                            std::pow(1.0 - eps, n - std::popcount(pattern));
        for (std::uint32_t redraw = 0; redraw < size; ++redraw) {
          if (redraw & ~pattern) continue;
          double rw = 1.0;
          for (int i = 0; i < n; ++i)
            if (pattern & (1u << i)) rw *= (redraw & (1u << i)) ? p : 1.0 - p;
          const std::uint32_t out = (omega & ~pattern) | redraw;
          corr += pw * patw * rw * f(omega) * f(out);
        }
      }
    }
    const double brute = static_cast<double>(corr - mean * mean);
    const NoiseCorrelation nc = noise_correlation_exact(f, eps);
    if (!close(brute, nc.direct, 1e-10)) {
      detail = "pattern-enumeration route disagrees, n=" + num(n);
      return false;
    }
  }
  return true;
}

bool check_hf_spectrum_relation(std::string& detail) {
  RngStream rng(kSuiteSeed, 4);
  for (double p : {0.1, 0.3, 0.7}) {
    for (int rep = 0; rep < 4; ++rep) {
      const int n = 2 + static_cast<int>(rng.next_u64() % 7);  // 2..8
      const BooleanFn f = make_random_fn(n, p, rng);
      const BooleanFn h = h_transform(f);
      const Spectrum sf = spectrum(f);
      const Spectrum sh = spectrum(h);
      const double pbar = std::min(p, 1.0 - p);
      for (std::uint32_t S = 0; S < f.table_size(); ++S) {
        const double want =
            std::pow(pbar / (1.0 - pbar), std::popcount(S) / 2.0) * sf.coef[S];
        if (!close(sh.coef[S], want, 1e-10)) {
          detail = "p=" + num(p) + " S=" + num(S) + " got=" + num(sh.coef[S]) +
                   " want=" + num(want);
          return false;
        }
      }
    }
  }
  return true;
}

bool check_hf_monotone_and_influences(std::string& detail) {
  RngStream rng(kSuiteSeed, 5);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 5);  // 2..6
    const double p = 0.1 + 0.8 * rng.next_unit();
    const bool monotone = rep % 2 == 0;
    const BooleanFn f = monotone ? make_random_monotone_fn(n, p, rng) : make_random_fn(n, p, rng);
    const BooleanFn h = h_transform(f);
    if (monotone && !h.is_monotone()) {
      detail = "h_f lost monotonicity, n=" + num(n) + " p=" + num(p);
      return false;
    }
    const double pbar = std::min(p, 1.0 - p);
    for (int i = 1; i <= n; ++i) {
      const double lhs = influence(h, i);
      const double rhs = 2.0 * pbar * influence(f, i);
      if (lhs > rhs + 1e-10) {
        detail = "influence bound failed, n=" + num(n) + " i=" + num(i);
        return false;
      }
      if (monotone && !close(lhs, rhs, 1e-10)) {
        detail = "influence equality failed for monotone f, n=" + num(n) + " i=" + num(i);
        return false;
      }
    }
  }
  return true;
}

bool check_fz_mk_routes(std::string& detail) {
  RngStream rng(kSuiteSeed, 6);
  for (int rep = 0; rep < 8; ++rep) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 5);  // 2..6
    const double p = rep % 2 == 0 ? 0.2 + 0.3 * rng.next_unit() : 0.5 + 0.4 * rng.next_unit();
    const BooleanFn f = make_random_fn(n, p, rng);
    const std::uint32_t K = static_cast<std::uint32_t>(rng.next_u64() % f.table_size());
    const double via_h = fz_mk_correlation(f, K);
    const double via_xy = fz_mk_correlation_xy(f, K);
    if (!close(via_h, via_xy, 1e-10)) {
      detail = "n=" + num(n) + " p=" + num(p) + " K=" + num(K) + " h=" + num(via_h) +
               " xy=" + num(via_xy);
      return false;
    }
  }
  return true;
}

bool check_inf_mk_inequality(std::string& detail) {
  // Witness constant C = 10 for the monotone influence/correlation bound.
  RngStream rng(kSuiteSeed, 7);
  const double C = 10.0;
  for (double p : {0.2, 0.5}) {
    for (int rep = 0; rep < 30; ++rep) {
      const int n = 2 + static_cast<int>(rng.next_u64() % 5);  // 2..6
      const BooleanFn f = rep % 2 == 0 ? make_random_monotone_fn(n, p, rng)
                                       : make_random_monotone_indicator(n, p, rng);
      const std::vector<double> inf = influences(f);
      const BooleanFn h = h_transform(f);
      const double pbar = std::min(p, 1.0 - p);
      for (std::uint32_t K = 1; K < f.table_size(); ++K) {
        double lhs = 0.0;
        for (int i = 0; i < n; ++i)
          if (K & (1u << i)) lhs += inf[i];
        double corr = 0.0;
        for (std::uint32_t X = 0; X < h.table_size(); ++X) corr += h(X) * majority_sign(K, X);
        corr /= static_cast<double>(h.table_size());
        if (corr <= 1e-14) {
          if (lhs > 1e-10) {
            detail = "zero correlation with positive influence sum, n=" + num(n);
            return false;
          }
          continue;
        }
        const double rhs = C / pbar * std::sqrt(static_cast<double>(std::popcount(K))) * corr *
                           (1.0 + std::sqrt(std::max(-std::log(corr), 0.0)));
        if (lhs > rhs + 1e-9) {
          detail = "witness C=10 failed, n=" + num(n) + " p=" + num(p) + " lhs=" + num(lhs) +
                   " rhs=" + num(rhs);
          return false;
        }
      }
    }
  }
  return true;
}

bool check_ii_lambda_inequality(std::string& detail) {
  RngStream rng(kSuiteSeed, 8);
  const double C = 10.0;
  for (double p : {0.2, 0.5}) {
    for (int rep = 0; rep < 20; ++rep) {
      const int n = 2 + static_cast<int>(rng.next_u64() % 5);
      const BooleanFn f = make_random_monotone_indicator(n, p, rng);
      const double ii = ii_p(f);
      const double lam = lambda_hf(f).value;
      if (lam <= 1e-14) {
        if (ii > 1e-10) {
          detail = "Lambda = 0 with II > 0, n=" + num(n);
          return false;
        }
        continue;
      }
      const double pbar = std::min(p, 1.0 - p);
      const double rhs =
          C / (pbar * pbar) * lam * lam * (1.0 - std::log(lam)) * std::log(std::max(n, 2));
      if (ii > rhs + 1e-9) {
        detail = "witness C=10 failed, n=" + num(n) + " p=" + num(p) + " II=" + num(ii) +
                 " rhs=" + num(rhs);
        return false;
      }
    }
  }
  return true;
}

bool check_prefix_opt(std::string& detail) {
  RngStream rng(kSuiteSeed, 9);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 10);
    std::vector<double> a(n);
    for (double& v : a) v = rng.next_unit() + 0.01;
    std::sort(a.begin(), a.end(), std::greater<>());
    const PrefixSqMax res = prefix_constrained_sq_max(a, 50, rng.fork(rep));
    if (!res.certified) {
      detail = "candidate beat sum of squares, n=" + num(n) + " best=" + num(res.best_candidate) +
               " claimed=" + num(res.value);
      return false;
    }
  }
  return true;
}

bool check_ss_bound(std::string& detail) {
  // OR on 3 bits under random-permutation order, then a two-tribes function.
  {
    BooleanFn f(3, 0.5);
    for (std::uint32_t omega = 0; omega < 8; ++omega) f.value(omega) = omega != 0 ? 1.0 : 0.0;
    const SsBoundReport rep = ss_bound_check(f, {QueryOrderSpec::Kind::all_permutations, {}});
    if (!rep.holds_for_all_k) {
      detail = "OR_3 failed";
      return false;
    }
  }
  {
    BooleanFn f(8, 0.5);
    for (std::uint32_t omega = 0; omega < 256; ++omega) {
      const bool t1 = (omega & 0x0F) == 0x0F;
      const bool t2 = (omega & 0xF0) == 0xF0;
      f.value(omega) = (t1 || t2) ? 1.0 : 0.0;
    }
    const SsBoundReport rep = ss_bound_check(f, {QueryOrderSpec::Kind::all_permutations, {}});
    if (!rep.holds_for_all_k) {
      detail = "tribes_8 failed";
      return false;
    }
  }
  {
    const BooleanFn f = BooleanFn::dictator(4, 0.5);
    const SsBoundReport rep = ss_bound_check(f, {QueryOrderSpec::Kind::fixed_order, {1, 2, 3, 4}});
    if (!rep.holds_for_all_k || !close(rep.delta_per_bit[0], 1.0, 1e-12)) {
      detail = "dictator sequential order failed";
      return false;
    }
  }
  return true;
}

bool check_chernoff_tails(std::string& detail) {
  for (double p : {0.1, 0.5}) {
    for (int n = 1; n <= 60; ++n) {
      const double pn = p * n;
      // Tail is a step function of a; check just below each step and at a
      // fine grid. Steps sit at |k - pn|.
      std::vector<double> steps;
      for (int k = 0; k <= n; ++k) steps.push_back(std::abs(k - pn));
      for (double grid = 0.0; grid <= pn / 2; grid += std::max(pn / 40.0, 0.05))
        steps.push_back(grid);
      for (double s : steps) {
        if (s <= 0.0) continue;
        const bool small_dev = s <= pn / 2 || p == 0.5;
        const double a = s * (1.0 - 1e-12);
        if (a <= 0.0) continue;
        const double tail = binomial_tail_above(n, a, p);
        const double bound = small_dev ? 2.0 * std::exp(-a * a / (4.0 * pn))
                                       : 2.0 * std::exp(-pn / 16.0);
        if (tail > bound * (1.0 + 1e-9)) {
          detail = "n=" + num(n) + " p=" + num(p) + " a=" + num(a) + " tail=" + num(tail) +
                   " bound=" + num(bound);
          return false;
        }
      }
    }
  }
  return true;
}

bool check_binomial_max_pmf(std::string& detail) {
  // Witness constant 1 for max_a P(xi = a) <= C / sqrt(n p (1-p)).
  for (double p : {0.05, 0.1, 0.3, 0.5, 0.7, 0.9}) {
    for (int n : {1, 2, 3, 5, 10, 30, 100, 300, 1000}) {
      double maxp = 0.0;
      for (int k = 0; k <= n; ++k) maxp = std::max(maxp, binomial_pmf(n, k, p));
      if (maxp * std::sqrt(n * p * (1.0 - p)) > 1.0 + 1e-12) {
        detail = "n=" + num(n) + " p=" + num(p) + " max_pmf=" + num(maxp);
        return false;
      }
    }
  }
  return true;
}

bool check_parity_spectrum(std::string& detail) {
  // At p = 1/2 parity carries all its non-empty mass at the top level, so its
  // noise correlation is Var * (1-eps)^n: the hallmark of sensitivity.
  for (int n : {2, 3, 5, 8}) {
    const BooleanFn f = BooleanFn::parity(n, 0.5);
    const Spectrum s = spectrum(f);
    for (std::uint32_t S = 1; S + 1 < f.table_size(); ++S) {
      if (std::abs(s.coef[S]) > 1e-10) {
        detail = "parity mass below top level, n=" + num(n) + " S=" + num(S);
        return false;
      }
    }
    const double var = f.mean_square() - f.mean() * f.mean();
    for (double eps : {0.1, 0.5, 0.9}) {
      const NoiseCorrelation nc = noise_correlation_exact(f, eps);
      if (!close(nc.spectral, var * std::pow(1.0 - eps, n), 1e-10)) {
        detail = "parity correlation shape failed, n=" + num(n);
        return false;
      }
    }
  }
  // The spectral correlation is monotone in eps for any f and vanishes at a
  // fixed eps iff every non-empty level vanishes.
  RngStream rng(kSuiteSeed, 40);
  for (double p : {0.3, 0.5, 0.8}) {
    const BooleanFn f = make_random_fn(4, p, rng);
    double prev = noise_correlation_exact(f, 0.0).spectral;
    for (double eps : {0.25, 0.5, 0.75, 1.0}) {
      const double cur = noise_correlation_exact(f, eps).spectral;
      if (cur > prev + 1e-12) {
        detail = "correlation not monotone in eps";
        return false;
      }
      prev = cur;
    }
    const double at_half = noise_correlation_exact(f, 0.5).spectral;
    const Spectrum s = spectrum(f);
    if ((at_half <= 1e-12) != (s.sum_squares_nonempty() <= 1e-12)) {
      detail = "vanishing correlation does not match vanishing mass";
      return false;
    }
  }
  return true;
}

// --- hypergraph ------------------------------------------------------------

bool check_bey(std::string& detail) {
  RngStream rng(kSuiteSeed, 10);
  for (int rep = 0; rep < 60; ++rep) {
    const int n = 10;
    const int m = 2 + static_cast<int>(rng.next_u64() % 2);
    const Hypergraph h = make_random_m_uniform(n, m, 0.05 + 0.9 * rng.next_unit(), rng);
    for (int t = 1; t <= m; ++t) {
      const BeyResult r = bey_inequality_check(h, m, t);
      if (!r.holds) {
        detail = "m=" + num(m) + " t=" + num(t) + " edges=" + num(h.edge_count());
        return false;
      }
    }
  }
  return true;
}

bool check_second_moment_identity(std::string& detail) {
  RngStream rng(kSuiteSeed, 11);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 8 + static_cast<int>(rng.next_u64() % 5);  // 8..12
    const int m = 2 + static_cast<int>(rng.next_u64() % 2);
    const int k = m + 2 + static_cast<int>(rng.next_u64() % (n - m - 1));
    const Hypergraph h = make_random_m_uniform(n, m, 0.4, rng);

    // Exhaustive second moment of X_m(B_k).
    long double sum_sq = 0.0L, sum = 0.0L;
    std::uint64_t count = 0;
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t S = 0; S < total; ++S) {
      if (std::popcount(S) != k) continue;
      const std::uint64_t x = x_m(S, h, m).x;
      sum += x;
      sum_sq += static_cast<long double>(x) * x;
      ++count;
    }
    const double e_x2 = static_cast<double>(sum_sq / count);
    double formula = 0.0;
    for (int t = 0; t <= m; ++t)
      formula += static_cast<double>(alpha_pairs(h, m, t)) *
                 (static_cast<double>(binom(k, 2 * m - t)) /
                  static_cast<double>(binom(n, 2 * m - t)));
    if (!close(e_x2, formula, 1e-9 * std::max(1.0, e_x2))) {
      detail = "n=" + num(n) + " m=" + num(m) + " k=" + num(k) + " exhaustive=" + num(e_x2) +
               " formula=" + num(formula);
      return false;
    }
    // Mean identity E[X_m] = beta_m C(k, m).
    const double e_x = static_cast<double>(sum / count);
    if (!close(e_x, h.beta(m) * static_cast<double>(binom(k, m)), 1e-9 * std::max(1.0, e_x))) {
      detail = "mean identity failed";
      return false;
    }
  }
  return true;
}

bool check_binom_identities(std::string& detail) {
  for (int m = 1; m <= 4; ++m) {
    for (int t = 1; t <= m; ++t) {
      for (int n : {3 * m * m * m, 3 * m * m * m + 7, 250}) {
        for (int k = m; k <= std::min(n, m + 12); ++k) {
          const BinomIdentityReport rep = binom_identities_check(n, k, m, t);
          if (!rep.a_equal) {
            detail = "(a) failed n=" + num(n) + " k=" + num(k) + " m=" + num(m);
            return false;
          }
          if (!rep.b_holds || !rep.c_holds) {
            detail = "(b)/(c) failed n=" + num(n) + " m=" + num(m) + " t=" + num(t);
            return false;
          }
        }
      }
    }
  }
  return true;
}

bool check_var_bounds(std::string& detail) {
  RngStream rng(kSuiteSeed, 12);
  for (int rep = 0; rep < 8; ++rep) {
    const int n = 12 + static_cast<int>(rng.next_u64() % 5);
    const int m = 1 + static_cast<int>(rng.next_u64() % 2);
    const int k = 4 + static_cast<int>(rng.next_u64() % 4);
    const Hypergraph h = make_random_m_uniform(n, m, 0.5, rng);
    const VarXmResult r = var_xm_exact(h, k, m);
    if (r.hyp_n_ge_3m3 && r.hyp_n_ge_km_half && r.variance > r.bound + 1e-9) {
      detail = "fixed-size variance bound failed n=" + num(n) + " k=" + num(k) + " m=" + num(m);
      return false;
    }
  }
  for (int rep = 0; rep < 6; ++rep) {
    const int n = 16;
    const int k = 6;
    const double p = 0.2;
    const Hypergraph h = make_random_hypergraph(8, 0.3, rng);
    // Lift to n = 16 vertices: edges live on the first 8.
    const Hypergraph lifted(n, h.edges());
    const VarRFixedK r = var_r_fixed_k(lifted, k, p);
    if (r.hyp_n_ge_24pk3 && r.hyp_n_ge_2pk2 && r.variance > r.bound + 1e-9) {
      detail = "fixed-k r variance bound failed";
      return false;
    }
  }
  return true;
}

bool check_mean_identity_var_q(std::string& detail) {
  RngStream rng(kSuiteSeed, 13);
  for (int rep = 0; rep < 8; ++rep) {
    const int n = 6 + static_cast<int>(rng.next_u64() % 7);  // 6..12
    const double q = 0.2 + 0.6 * rng.next_unit();
    const double p = 0.1 + 0.6 * rng.next_unit();
    const Hypergraph h = make_random_hypergraph(n, 0.2 + 0.3 * rng.next_unit(), rng);
    const VarQR r = var_q_r(h, q, p);
    if (!close(r.mean, r.mean_product_law, 1e-10)) {
      detail = "n=" + num(n) + " mean=" + num(r.mean) + " product=" + num(r.mean_product_law);
      return false;
    }
    if (r.variance < -1e-12) {
      detail = "negative variance";
      return false;
    }
  }
  return true;
}

// Worst pmf ratio deviation over the windows of the nearby-binomial lemma.
double pmf_ratio_extreme(double p, double q, long long n) {
  const double qn = q * static_cast<double>(n);
  const double L = std::log(1.0 / p);
  const double span = 2.0 * std::sqrt(qn * L);
  const long long k_lo = static_cast<long long>(std::ceil(qn - span));
  const long long k_hi = static_cast<long long>(std::floor(qn + span));
  const double mspan = 4.0 * std::sqrt(p * qn * L);
  const int m_lo = std::max(0, static_cast<int>(std::ceil(p * qn - mspan)));
  const int m_hi = static_cast<int>(std::floor(p * qn + mspan));
  double worst = 0.0;
  for (int m : {m_lo, (m_lo + m_hi) / 2, m_hi}) {
    const double base = binomial_pmf(k_lo, m, p);
    const double top = binomial_pmf(k_hi, m, p);
    if (base <= 0.0 || top <= 0.0) continue;
    worst = std::max({worst, std::abs(top / base - 1.0), std::abs(base / top - 1.0)});
  }
  return worst;
}

bool check_pmf_ratio(std::string& detail) {
  // The ratio deviates by O(sqrt(p) log 1/p). Fit the constant on a
  // decreasing-p grid and require it not to grow as p drops, then check the
  // literal witness band (c = 20) deep in the small-p regime where the
  // first-order form is accurate.
  const double q = 0.5;
  double prev_c = std::numeric_limits<double>::infinity();
  for (double p : {0.02, 0.01, 0.005, 0.002}) {
    const double L = std::log(1.0 / p);
    const long long n = static_cast<long long>(std::ceil(40.0 * L / (p * q)));
    const double x = std::sqrt(p) * L;
    const double fitted = pmf_ratio_extreme(p, q, n) / x;
    if (fitted > prev_c * 1.05) {
      detail = "fitted constant grew as p dropped: " + num(fitted) + " after " + num(prev_c);
      return false;
    }
    prev_c = fitted;
  }
  for (double p : {1e-6, 1e-7}) {
    const double L = std::log(1.0 / p);
    const long long n = static_cast<long long>(std::ceil(40.0 * L / (p * q)));
    const double worst = pmf_ratio_extreme(p, q, n);
    if (worst > 20.0 * std::sqrt(p) * L) {
      detail = "witness band failed at p=" + num(p) + " worst=" + num(worst);
      return false;
    }
  }
  return true;
}

bool check_binomial_tail_bounds(std::string& detail) {
  for (double p : {0.05, 0.1, 0.25, 0.5}) {
    for (double q : {0.2, 0.5, 0.8}) {
      for (int n : {512, 2048, 8192}) {
        if (p * q * n < 32.0 * std::log(1.0 / p)) continue;
        const double qn = q * n;
        const double a = 2.0 * std::sqrt(qn * std::log(1.0 / p));
        if (binomial_tail_above(n, a, q) > 2.0 * p * (1.0 + 1e-9)) {
          detail = "(a) failed p=" + num(p) + " q=" + num(q) + " n=" + num(n);
          return false;
        }
        const double low_cut = 16.0 / p * std::log(1.0 / p);
        const double below = binomial_cdf(n, static_cast<int>(std::ceil(low_cut)) - 1, q);
        if (below > 2.0 * p * (1.0 + 1e-9)) {
          detail = "(b) failed p=" + num(p) + " q=" + num(q) + " n=" + num(n);
          return false;
        }
      }
    }
  }
  return true;
}

// --- sampling / noise ------------------------------------------------------

bool check_thinning_enumeration(std::string& detail) {
  // Two-step thinning equals one-step at pq: exact over all intermediate
  // subsets, |S| = 12.
  const int n = 12;
  const double p = 0.35, q = 0.6;
  const std::uint64_t total = std::uint64_t{1} << n;
  // P(T) under two-step, for |T| of each size: compute P(T fixed) by summing
  // over supersets M of T.
  for (std::uint64_t T : {std::uint64_t{0}, std::uint64_t{0b1}, std::uint64_t{0b101011},
                          total - 1}) {
    long double prob = 0.0L;
    for (std::uint64_t M = 0; M < total; ++M) {
      if (T & ~M) continue;
      const int msz = std::popcount(M);
      const int tsz = std::popcount(T);
      prob += std::pow(static_cast<long double>(q), msz) *
              std::pow(static_cast<long double>(1.0 - q), n - msz) *
              std::pow(static_cast<long double>(p), tsz) *
              std::pow(static_cast<long double>(1.0 - p), msz - tsz);
    }
    const int tsz = std::popcount(T);
    const long double direct = std::pow(static_cast<long double>(p * q), tsz) *
                               std::pow(static_cast<long double>(1.0 - p * q), n - tsz);
    if (std::abs(static_cast<double>(prob - direct)) > 1e-12) {
      detail = "T size " + num(tsz);
      return false;
    }
  }
  // Sampler agreement at matched frequencies (pairwise joint too).
  RngStream rng(kSuiteSeed, 14);
  const int reps = 20000;
  int c_two = 0, c_one = 0, c_pair_two = 0, c_pair_one = 0;
  for (int r = 0; r < reps; ++r) {
    const auto mid = p_subset_bits(n, q, rng.fork(2 * r));
    std::vector<std::uint8_t> two(n, 0);
    RngStream inner = rng.fork(2 * r + 1);
    for (int i = 0; i < n; ++i) two[i] = mid[i] && inner.bernoulli(p);
    const auto one = p_subset_bits(n, p * q, rng.fork(100000 + r));
    c_two += two[0];
    c_one += one[0];
    c_pair_two += two[0] && two[1];
    c_pair_one += one[0] && one[1];
  }
  const double sd = 3.0 * std::sqrt(p * q / reps);
  if (std::abs(static_cast<double>(c_two - c_one)) / reps > 2.5 * sd) {
    detail = "sampler one-bit frequency drifted";
    return false;
  }
  if (std::abs(static_cast<double>(c_pair_two - c_pair_one)) / reps > 2.5 * sd) {
    detail = "sampler pairwise frequency drifted";
    return false;
  }
  return true;
}

bool check_noise_kernels(std::string& detail) {
  // Per-bit transition algebra: composing eps1 then eps2 equals the single
  // level 1 - (1-eps1)(1-eps2); coupling symmetry P(1->0) = P(0->1) weighted
  // by the stationary law.
  for (double p : {0.2, 0.5, 0.8}) {
    for (double e1 : {0.1, 0.4, 0.9}) {
      for (double e2 : {0.2, 0.7}) {
        const double e12 = 1.0 - (1.0 - e1) * (1.0 - e2);
        // K_e(x, y) entries
        auto K = [p](double e, int x, int y) {
          const double stay = 1.0 - e;
          const double redraw = e * (y == 1 ? p : 1.0 - p);
          return (x == y ? stay : 0.0) + redraw;
        };
        for (int x : {0, 1})
          for (int y : {0, 1}) {
            double comp = 0.0;
            for (int z : {0, 1}) comp += K(e1, x, z) * K(e2, z, y);
            if (std::abs(comp - K(e12, x, y)) > 1e-14) {
              detail = "composition failed p=" + num(p);
              return false;
            }
          }
        const double p10 = p * K(e1, 1, 0);
        const double p01 = (1.0 - p) * K(e1, 0, 1);
        if (std::abs(p10 - p01) > 1e-14) {
          detail = "coupling symmetry failed p=" + num(p);
          return false;
        }
      }
    }
  }
  // n <= 8 enumeration through the actual sampler kernel on full vectors.
  RngStream rng(kSuiteSeed, 15);
  const int n = 8, reps = 4000;
  const double p = 0.3, e1 = 0.35, e2 = 0.5;
  const double e12 = 1.0 - (1.0 - e1) * (1.0 - e2);
  int agree_comp = 0, agree_single = 0;
  for (int r = 0; r < reps; ++r) {
    const auto base = p_subset_bits(n, p, rng.fork(3 * r));
    const auto mid = discrete_perturb(base, e1, p, rng.fork(3 * r + 1));
    const auto twice = discrete_perturb(mid, e2, p, rng.fork(3 * r + 2));
    const auto once = discrete_perturb(base, e12, p, rng.fork(900000 + r));
    for (int i = 0; i < n; ++i) {
      agree_comp += twice[i] == base[i];
      agree_single += once[i] == base[i];
    }
  }
  const double diff = std::abs(agree_comp - agree_single) / static_cast<double>(reps * n);
  if (diff > 3.5 * std::sqrt(0.25 / (reps * n)) * 1.5) {
    detail = "sampled composition agreement drifted: " + num(diff);
    return false;
  }
  return true;
}

// --- geometry / flood / discretize -----------------------------------------

bool check_grid_completeness(std::string& detail) {
  RngStream rng(kSuiteSeed, 16);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 40;
    std::vector<Vec2> pts(n);
    for (Vec2& p : pts) p = {rng.uniform(-8, 8), rng.uniform(-8, 8)};
    SpatialGrid grid(pts, 2.0);
    for (int i = 0; i < n; ++i) {
      std::vector<char> seen(n, 0);
      grid.for_candidates(pts[i], [&](std::uint32_t j) { seen[j] = 1; });
      for (int j = 0; j < n; ++j) {
        if (dist(pts[i], pts[j]) <= 2.0 && !seen[j]) {
          detail = "grid missed a pair at distance " + num(dist(pts[i], pts[j]));
          return false;
        }
      }
    }
  }
  return true;
}

bool check_duality(std::string& detail) {
  RngStream rng(kSuiteSeed, 17);
  const Rect rect = Rect::centered(8, 8);
  for (int rep = 0; rep < 40; ++rep) {
    const PointSet eta = sample_poisson(rect.padded(1.0), 0.2 + rng.next_unit(), rng.fork(rep));
    const bool occ_h = occupied_horizontal_crossing(eta.points, rect);
    const bool vac_v = vacant_crossing(eta.points, rect, CrossDirection::vertical);
    if (occ_h == vac_v) {
      detail = "duality violated at rep " + num(rep);
      return false;
    }
  }
  return true;
}

bool check_flood_determinacy(std::string& detail) {
  RngStream rng(kSuiteSeed, 18);
  const double N = 5.0;
  for (int rep = 0; rep < 6; ++rep) {
    PointSet B = sample_poisson(Rect::centered(N + 2, N + 2), 0.35, rng.fork(rep));
    if (B.size() > 12) B.points.resize(12);
    const std::size_t sz = B.size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << sz); ++mask) {
      std::vector<std::uint8_t> eta(sz);
      std::vector<Vec2> eta_pts;
      for (std::size_t i = 0; i < sz; ++i) {
        eta[i] = (mask >> i) & 1;
        if (eta[i]) eta_pts.push_back(B.points[i]);
      }
      const FloodTrace t = run_flood_query(B.points, eta, N, FloodSide::left);
      const bool want = occupied_horizontal_crossing(eta_pts, Rect::centered(N, N));
      if (t.output != want) {
        detail = "rep=" + num(rep) + " mask=" + num(mask);
        return false;
      }
    }
  }
  return true;
}

bool check_snap_law(std::string& detail) {
  // Snapped occupation is an exact q-subset of the sites: chi-square on
  // per-site counts plus a pairwise independence check.
  const double a = 2.0, b = 2.0, delta = 0.5, p = 0.5, lambda_c = 0.4;
  const Lattice lat = Lattice::make(a, b, delta);
  const double q = q_of(delta, p, lambda_c);
  const int reps = 4000;
  RngStream rng(kSuiteSeed, 19);
  std::vector<int> hits(static_cast<std::size_t>(lat.site_count()), 0);
  int joint00 = 0;
  const long long s0 = 0, s1 = lat.site_count() / 2;
  for (int r = 0; r < reps; ++r) {
    const PointSet B = sample_poisson(lat.covered_region(), lambda_c / p, rng.fork(r));
    const std::vector<long long> sites = snap(B, lat);
    for (long long s : sites) ++hits[s];
    const bool h0 = std::binary_search(sites.begin(), sites.end(), s0);
    const bool h1 = std::binary_search(sites.begin(), sites.end(), s1);
    joint00 += h0 && h1;
  }
  double chi2 = 0.0;
  for (long long s = 0; s < lat.site_count(); ++s) {
    const double expect = q * reps;
    chi2 += (hits[s] - expect) * (hits[s] - expect) / (expect * (1.0 - q));
  }
  const double tail = chi_square_tail(chi2, static_cast<int>(lat.site_count()));
  if (tail < 1e-5) {
    detail = "chi-square tail " + num(tail);
    return false;
  }
  const double joint = static_cast<double>(joint00) / reps;
  if (std::abs(joint - q * q) > 4.0 * std::sqrt(q * q * (1 - q * q) / reps) + 1e-6) {
    detail = "pairwise independence drifted: " + num(joint) + " vs " + num(q * q);
    return false;
  }
  return true;
}

bool check_qof(std::string& detail) {
  if (!close(q_of(1e-9, 0.3, 0.36), 0.0, 1e-12)) {
    detail = "q does not vanish with delta";
    return false;
  }
  const double d = std::sqrt(std::log(2.0) * 0.1 / 0.36);
  if (!close(q_of(d, 0.1, 0.36), 0.5, 1e-12)) {
    detail = "q at log 2 point";
    return false;
  }
  // p q n tracks lambda_c times the covered area.
  const Lattice lat = Lattice::make(10, 10, 0.05);
  const double q = q_of(0.05, 0.1, 0.36);
  const double pqn = 0.1 * q * lat.site_count();
  const Rect reg = lat.covered_region();
  const double want = 0.36 * reg.width * reg.height;
  if (std::abs(pqn / want - 1.0) > 0.02) {
    detail = "pqn=" + num(pqn) + " lambda*area=" + num(want);
    return false;
  }
  return true;
}

bool check_sampling_determinism(std::string& detail) {
  const Rect region = Rect::centered(10, 10);
  const PointSet a = sample_poisson(region, 1.0, RngStream(42, 7));
  const PointSet b = sample_poisson(region, 1.0, RngStream(42, 7));
  if (a.size() != b.size()) {
    detail = "sizes differ";
    return false;
  }
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.points[i].x != b.points[i].x || a.points[i].y != b.points[i].y) {
      detail = "coordinates differ at " + num(i);
      return false;
    }
  const PointSet c = sample_poisson(region, 1.0, RngStream(42, 8));
  if (a.size() == c.size()) {
    bool same = true;
    for (std::size_t i = 0; i < a.size(); ++i)
      same = same && a.points[i].x == c.points[i].x;
    if (same) {
      detail = "distinct streams produced identical output";
      return false;
    }
  }
  return true;
}

}  // namespace

int run_oracle_suite(std::ostream& out, int threads) {
  (void)threads;  // every check is already deterministic; kept for symmetry
  const std::vector<Check> checks = {
      {"fourier.orthonormality", check_orthonormality},
      {"fourier.parseval_reconstruction", check_parseval_reconstruction},
      {"fourier.noise_correlation_identity", check_noise_correlation_identity},
      {"fourier.hf_spectrum_relation", check_hf_spectrum_relation},
      {"fourier.hf_monotone_influences", check_hf_monotone_and_influences},
      {"fourier.fz_mk_two_routes", check_fz_mk_routes},
      {"fourier.influence_mk_witness", check_inf_mk_inequality},
      {"fourier.ii_lambda_witness", check_ii_lambda_inequality},
      {"fourier.prefix_sq_max", check_prefix_opt},
      {"fourier.level_mass_revealment", check_ss_bound},
      {"fourier.chernoff_exact_tails", check_chernoff_tails},
      {"fourier.binomial_max_pmf", check_binomial_max_pmf},
      {"fourier.parity_spectrum", check_parity_spectrum},
      {"hypergraph.degree_square_bound", check_bey},
      {"hypergraph.second_moment_identity", check_second_moment_identity},
      {"hypergraph.binom_identities", check_binom_identities},
      {"hypergraph.variance_bounds", check_var_bounds},
      {"hypergraph.mean_identity_var_q", check_mean_identity_var_q},
      {"hypergraph.pmf_ratio_witness", check_pmf_ratio},
      {"hypergraph.binomial_tail_bounds", check_binomial_tail_bounds},
      {"sampling.thinning_law", check_thinning_enumeration},
      {"sampling.determinism", check_sampling_determinism},
      {"noise.kernel_algebra", check_noise_kernels},
      {"geometry.grid_completeness", check_grid_completeness},
      {"geometry.duality", check_duality},
      {"flood.exhaustive_determinacy", check_flood_determinacy},
      {"discretize.snap_law", check_snap_law},
      {"discretize.q_formula", check_qof},
  };

  int failures = 0;
  for (const Check& c : checks) {
    std::string detail;
    bool ok = false;
    try {
      ok = c.fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    if (!ok) ++failures;
    out << (ok ? "[PASS] " : "[FAIL] ") << c.name;
    if (!ok && !detail.empty()) out << "  (" << detail << ")";
    out << '\n';
  }
  out << (failures == 0 ? "all checks passed" : "FAILURES: " + std::to_string(failures)) << '\n';
  return failures;
}

}  // namespace perconoise
