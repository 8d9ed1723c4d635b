#include "perconoise/fourier.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

namespace perconoise {

namespace {

void check_density(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("density p must lie strictly inside (0,1)");
}

// Product-measure weights pi_p(omega) indexed by popcount.
std::vector<double> weight_by_count(int n, double p) {
  std::vector<double> w(n + 1);
  for (int k = 0; k <= n; ++k) w[k] = std::pow(p, k) * std::pow(1.0 - p, n - k);
  return w;
}

// Applies an independent 2x2 kernel per coordinate, in place.
// out_0 = k00 * in_0 + k01 * in_1, out_1 = k10 * in_0 + k11 * in_1.
void tensor_apply(std::vector<double>& a, int n, double k00, double k01, double k10,
                  double k11) {
  const std::size_t size = a.size();
  for (int i = 0; i < n; ++i) {
    const std::size_t bit = std::size_t{1} << i;
    for (std::size_t base = 0; base < size; ++base) {
      if (base & bit) continue;
      const double x0 = a[base], x1 = a[base | bit];
      a[base] = k00 * x0 + k01 * x1;
      a[base | bit] = k10 * x0 + k11 * x1;
    }
  }
}

}  // namespace

BooleanFn::BooleanFn(int n, double p) : BooleanFn(n, p, std::vector<double>(1u << n, 0.0)) {}

BooleanFn::BooleanFn(int n, double p, std::vector<double> table) : n_(n), p_(p), table_(std::move(table)) {
  if (n < 0 || n > kMaxN) throw std::length_error("BooleanFn: n exceeds the table capacity guard");
  check_density(p);
  if (table_.size() != (std::size_t{1} << n))
    throw std::invalid_argument("BooleanFn: table size must be 2^n");
  for (double v : table_)
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("BooleanFn: values must lie in [0,1]");
}

double BooleanFn::mean() const {
  const auto w = weight_by_count(n_, p_);
  double s = 0.0;
  for (std::size_t omega = 0; omega < table_.size(); ++omega)
    s += w[std::popcount(static_cast<std::uint32_t>(omega))] * table_[omega];
  return s;
}

double BooleanFn::mean_square() const {
  const auto w = weight_by_count(n_, p_);
  double s = 0.0;
  for (std::size_t omega = 0; omega < table_.size(); ++omega)
    s += w[std::popcount(static_cast<std::uint32_t>(omega))] * table_[omega] * table_[omega];
  return s;
}

bool BooleanFn::is_monotone(double tol) const {
  for (std::size_t omega = 0; omega < table_.size(); ++omega) {
    for (int i = 0; i < n_; ++i) {
      const std::size_t bit = std::size_t{1} << i;
      if (!(omega & bit) && table_[omega] > table_[omega | bit] + tol) return false;
    }
  }
  return true;
}

BooleanFn BooleanFn::constant(int n, double p, double c) {
  return BooleanFn(n, p, std::vector<double>(std::size_t{1} << n, c));
}

BooleanFn BooleanFn::dictator(int n, double p, int i) {
  BooleanFn f(n, p);
  const std::uint32_t bit = 1u << (i - 1);
  for (std::uint32_t omega = 0; omega < f.table_size(); ++omega)
    f.value(omega) = (omega & bit) ? 1.0 : 0.0;
  return f;
}

BooleanFn BooleanFn::parity(int n, double p) {
  BooleanFn f(n, p);
  for (std::uint32_t omega = 0; omega < f.table_size(); ++omega)
    f.value(omega) = (std::popcount(omega) % 2 == 0) ? 1.0 : 0.0;
  return f;
}

BooleanFn BooleanFn::majority_indicator(int n, double p) {
  BooleanFn f(n, p);
  for (std::uint32_t omega = 0; omega < f.table_size(); ++omega)
    f.value(omega) = 2 * std::popcount(omega) > n ? 1.0 : 0.0;
  return f;
}

BooleanFn BooleanFn::from_stream(std::istream& in) {
  int n = 0;
  double p = 0.0;
  if (!(in >> n >> p)) throw std::runtime_error("BooleanFn: malformed header");
  if (n < 0 || n > kMaxN) throw std::length_error("BooleanFn: n exceeds the table capacity guard");
  std::vector<double> table(std::size_t{1} << n);
  for (std::size_t row = 0; row < table.size(); ++row) {
    double v;
    if (!(in >> v)) throw std::runtime_error("BooleanFn: missing table value");
    // Row order is lexicographic in (omega_1, ..., omega_n): bit (n-i) of the
    // row index is omega_i. Convert to the internal index.
    std::uint32_t omega = 0;
    for (int i = 1; i <= n; ++i)
      if (row & (std::size_t{1} << (n - i))) omega |= 1u << (i - 1);
    table[omega] = v;
  }
  return BooleanFn(n, p, std::move(table));
}

void BooleanFn::to_stream(std::ostream& out) const {
  out << n_ << ' ' << p_ << '\n';
  for (std::size_t row = 0; row < table_.size(); ++row) {
    std::uint32_t omega = 0;
    for (int i = 1; i <= n_; ++i)
      if (row & (std::size_t{1} << (n_ - i))) omega |= 1u << (i - 1);
    out << table_[omega] << '\n';
  }
}

double chi(std::uint32_t S, std::uint32_t omega, double p) {
  check_density(p);
  const double on = -std::sqrt((1.0 - p) / p);
  const double off = std::sqrt(p / (1.0 - p));
  double v = 1.0;
  while (S) {
    const std::uint32_t bit = S & (~S + 1);
    v *= (omega & bit) ? on : off;
    S ^= bit;
  }
  return v;
}

double Spectrum::sum_squares_nonempty() const {
  double s = 0.0;
  for (std::size_t S = 1; S < coef.size(); ++S) s += coef[S] * coef[S];
  return s;
}

double Spectrum::level_mass(int k) const {
  double s = 0.0;
  for (std::size_t S = 0; S < coef.size(); ++S)
    if (std::popcount(static_cast<std::uint32_t>(S)) == k) s += coef[S] * coef[S];
  return s;
}

Spectrum spectrum(const BooleanFn& f) {
  Spectrum spec;
  spec.n = f.n();
  spec.p = f.p();
  spec.coef = f.table();
  // Per-coordinate butterfly for S_i = 0 / S_i = 1:
  //   E-part: (1-p) f0 + p f1,   chi-part: sqrt(p(1-p)) (f0 - f1).
  const double p = f.p();
  const double c = std::sqrt(p * (1.0 - p));
  tensor_apply(spec.coef, f.n(), 1.0 - p, p, c, -c);
  return spec;
}

double reconstruct(const Spectrum& spec, std::uint32_t omega) {
  double v = 0.0;
  for (std::size_t S = 0; S < spec.coef.size(); ++S)
    v += spec.coef[S] * chi(static_cast<std::uint32_t>(S), omega, spec.p);
  return v;
}

BooleanFn reconstruct_all(const Spectrum& spec) {
  std::vector<double> table = spec.coef;
  const double p = spec.p;
  // Inverse of the spectrum butterfly.
  tensor_apply(table, spec.n, 1.0, std::sqrt(p / (1.0 - p)), 1.0, -std::sqrt((1.0 - p) / p));
  for (double& v : table) v = std::min(std::max(v, 0.0), 1.0);  // round-off clamp
  return BooleanFn(spec.n, p, std::move(table));
}

NoiseCorrelation noise_correlation_exact(const BooleanFn& f, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0))
    throw std::invalid_argument("noise_correlation_exact: epsilon must lie in [0,1]");
  const int n = f.n();
  const double p = f.p();

  NoiseCorrelation out;
  const Spectrum spec = spectrum(f);
  for (std::size_t S = 1; S < spec.coef.size(); ++S)
    out.spectral += spec.coef[S] * spec.coef[S] *
                    std::pow(1.0 - epsilon, std::popcount(static_cast<std::uint32_t>(S)));

  // Direct route: g = E[f(omega^eps) | omega] by the per-bit re-randomisation
  // kernel, then E_p[f g] - E_p[f]^2. No spectral quantity is involved.
  std::vector<double> g = f.table();
  tensor_apply(g, n, 1.0 - epsilon * p, epsilon * p, epsilon * (1.0 - p),
               1.0 - epsilon * (1.0 - p));
  const auto w = weight_by_count(n, p);
  double efg = 0.0, ef = 0.0;
  for (std::size_t omega = 0; omega < g.size(); ++omega) {
    const double pi = w[std::popcount(static_cast<std::uint32_t>(omega))];
    efg += pi * f(static_cast<std::uint32_t>(omega)) * g[omega];
    ef += pi * f(static_cast<std::uint32_t>(omega));
  }
  out.direct = efg - ef * ef;
  return out;
}

double influence(const BooleanFn& f, int i) {
  if (i < 1 || i > f.n()) throw std::invalid_argument("influence: index out of range");
  const auto w = weight_by_count(f.n(), f.p());
  const std::uint32_t bit = 1u << (i - 1);
  double s = 0.0;
  for (std::uint32_t omega = 0; omega < f.table_size(); ++omega)
    s += w[std::popcount(omega)] * std::abs(f(omega) - f(omega ^ bit));
  return s;
}

std::vector<double> influences(const BooleanFn& f) {
  std::vector<double> out(f.n());
  for (int i = 1; i <= f.n(); ++i) out[i - 1] = influence(f, i);
  return out;
}

double ii_p(const BooleanFn& f) {
  double s = 0.0;
  for (double v : influences(f)) s += v * v;
  return s;
}

BooleanFn h_transform(const BooleanFn& f) {
  const int n = f.n();
  const double p = f.p();
  std::vector<double> h = f.table();
  if (p <= 0.5) {
    // X_i = 0 forces Z_i = 0; X_i = 1 draws Z_i ~ Bernoulli(2p).
    tensor_apply(h, n, 1.0, 0.0, 1.0 - 2.0 * p, 2.0 * p);
  } else {
    // X_i = 1 forces Z_i = 1; X_i = 0 draws Z_i = 0 w.p. 2(1-p).
    tensor_apply(h, n, 2.0 * (1.0 - p), 2.0 * p - 1.0, 0.0, 1.0);
  }
  return BooleanFn(n, 0.5, std::move(h));
}

int majority_sign(std::uint32_t K, std::uint32_t X) {
  const int k = std::popcount(K);
  const int ones = std::popcount(K & X);
  const int diff = 2 * ones - k;
  return (diff > 0) - (diff < 0);
}

double fz_mk_correlation(const BooleanFn& f, std::uint32_t K) {
  const BooleanFn h = h_transform(f);
  const double scale = 1.0 / static_cast<double>(h.table_size());
  double s = 0.0;
  for (std::uint32_t X = 0; X < h.table_size(); ++X) s += h(X) * majority_sign(K, X);
  return s * scale;
}

double fz_mk_correlation_xy(const BooleanFn& f, std::uint32_t K) {
  const int n = f.n();
  if (n > 12) throw std::length_error("fz_mk_correlation_xy: n exceeds the 4^n capacity guard");
  const double p = f.p();
  const std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1);
  const double py = p <= 0.5 ? 2.0 * p : 2.0 * (1.0 - p);
  const auto wy = weight_by_count(n, py);
  const double wx = 1.0 / static_cast<double>(std::size_t{1} << n);
  double s = 0.0;
  for (std::uint32_t X = 0; X <= full; ++X) {
    const int mk = majority_sign(K, X);
    if (mk == 0) continue;
    for (std::uint32_t Y = 0; Y <= full; ++Y) {
      const std::uint32_t Z = p <= 0.5 ? (X & Y) : (X | (full & ~Y));
      s += wx * wy[std::popcount(Y)] * f(Z) * mk;
    }
  }
  return s;
}

LambdaHf lambda_hf(const BooleanFn& f) {
  if (f.n() > 16) throw std::length_error("lambda_hf: n exceeds the 2^n x 2^n capacity guard");
  const BooleanFn h = h_transform(f);
  const std::uint32_t size = static_cast<std::uint32_t>(h.table_size());
  const double scale = 1.0 / static_cast<double>(size);
  LambdaHf best;  // K = empty gives 0
  for (std::uint32_t K = 0; K < size; ++K) {
    double s = 0.0;
    for (std::uint32_t X = 0; X < size; ++X) s += h(X) * majority_sign(K, X);
    s *= scale;
    if (s > best.value) {
      best.value = s;
      best.argmax = K;
    }
  }
  return best;
}

PrefixSqMax prefix_constrained_sq_max(std::span<const double> a, int candidates, RngStream rng) {
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!(a[i] >= 0.0)) throw std::invalid_argument("prefix_constrained_sq_max: entries must be >= 0");
    if (i > 0 && a[i] > a[i - 1] + 1e-15)
      throw std::invalid_argument("prefix_constrained_sq_max: entries must be non-increasing");
  }
  std::vector<double> prefix(n);
  std::partial_sum(a.begin(), a.end(), prefix.begin());

  PrefixSqMax out;
  for (double v : a) out.value += v * v;

  auto score_feasible = [&](std::vector<double> raw) {
    // Project onto { sorted non-increasing, non-negative, prefix-dominated }.
    std::sort(raw.begin(), raw.end(), std::greater<>());
    double run = 0.0, prev = std::numeric_limits<double>::infinity();
    double sumsq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double c = std::min({raw[i], prefix[i] - run, prev});
      c = std::max(c, 0.0);
      run += c;
      prev = c;
      sumsq += c * c;
    }
    out.best_candidate = std::max(out.best_candidate, sumsq);
  };

  // Structured candidates: a itself and block averages of its prefixes.
  score_feasible(std::vector<double>(a.begin(), a.end()));
  for (std::size_t k = 1; k <= n; ++k)
    score_feasible(std::vector<double>(n, prefix[k - 1] / static_cast<double>(k)));
  for (int c = 0; c < candidates; ++c) {
    std::vector<double> raw(n);
    const double scale = (a.empty() ? 1.0 : a[0]) * 2.0;
    for (double& v : raw) v = rng.next_unit() * scale;
    score_feasible(std::move(raw));
  }
  out.certified = out.best_candidate <= out.value + 1e-9;
  return out;
}

namespace {

// Memoised "is f determined" oracle over partial assignments.
class DeterminedOracle {
 public:
  explicit DeterminedOracle(const BooleanFn& f) : f_(f) {}

  bool determined(std::uint32_t revealed, std::uint32_t values) {
    const auto [mn, mx] = minmax(revealed, values & revealed);
    return mn == mx;
  }

 private:
  std::pair<double, double> minmax(std::uint32_t revealed, std::uint32_t values) {
    const std::uint32_t full = static_cast<std::uint32_t>(f_.table_size()) - 1;
    if (revealed == full) {
      const double v = f_(values);
      return {v, v};
    }
    const std::uint64_t key = (static_cast<std::uint64_t>(revealed) << 32) | values;
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    const std::uint32_t free_bits = full & ~revealed;
    const std::uint32_t bit = free_bits & (~free_bits + 1);
    const auto lo = minmax(revealed | bit, values);
    const auto hi = minmax(revealed | bit, values | bit);
    const std::pair<double, double> res{std::min(lo.first, hi.first),
                                        std::max(lo.second, hi.second)};
    memo_.emplace(key, res);
    return res;
  }

  const BooleanFn& f_;
  std::unordered_map<std::uint64_t, std::pair<double, double>> memo_;
};

}  // namespace

SsBoundReport ss_bound_check(const BooleanFn& f, const QueryOrderSpec& algorithm) {
  if (f.p() != 0.5)
    throw std::invalid_argument("ss_bound_check: the bound is for density 1/2");
  const int n = f.n();
  if (n > 12) throw std::length_error("ss_bound_check: n exceeds the capacity guard");
  if (algorithm.kind == QueryOrderSpec::Kind::all_permutations && n > 8)
    throw std::length_error("ss_bound_check: permutation enumeration capped at n <= 8");

  DeterminedOracle oracle(f);
  const std::uint32_t inputs = static_cast<std::uint32_t>(f.table_size());
  std::vector<std::uint64_t> counts(n, 0);
  std::uint64_t runs = 0;

  auto run_order = [&](const std::vector<int>& order) {
    for (std::uint32_t omega = 0; omega < inputs; ++omega) {
      std::uint32_t revealed = 0;
      for (int j : order) {
        if (oracle.determined(revealed, omega)) break;
        ++counts[j - 1];
        revealed |= 1u << (j - 1);
      }
    }
    runs += inputs;
  };

  if (algorithm.kind == QueryOrderSpec::Kind::fixed_order) {
    if (static_cast<int>(algorithm.order.size()) != n)
      throw std::invalid_argument("ss_bound_check: fixed order must be a permutation of [n]");
    run_order(algorithm.order);
  } else {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 1);
    do {
      run_order(order);
    } while (std::next_permutation(order.begin(), order.end()));
  }

  SsBoundReport rep;
  rep.delta_per_bit.resize(n);
  for (int j = 0; j < n; ++j) {
    rep.delta_per_bit[j] = static_cast<double>(counts[j]) / static_cast<double>(runs);
    rep.revealment = std::max(rep.revealment, rep.delta_per_bit[j]);
  }

  const Spectrum spec = spectrum(f);
  const double norm2 = f.mean_square();
  rep.holds_for_all_k = true;
  for (int k = 1; k <= n; ++k) {
    rep.level_mass.push_back(spec.level_mass(k));
    rep.bound.push_back(k * norm2 * rep.revealment);
    if (rep.level_mass.back() > rep.bound.back() + 1e-12) rep.holds_for_all_k = false;
  }
  return rep;
}

}  // namespace perconoise
