#include "perconoise/hypergraph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace perconoise {

namespace {

using u128 = unsigned __int128;

constexpr int kMaxBinomN = 64;

const std::vector<std::uint64_t>& binom_table() {
  static const std::vector<std::uint64_t> table = [] {
    std::vector<std::uint64_t> t((kMaxBinomN + 1) * (kMaxBinomN + 1), 0);
    auto at = [&t](int n, int k) -> std::uint64_t& { return t[n * (kMaxBinomN + 1) + k]; };
    for (int n = 0; n <= kMaxBinomN; ++n) {
      at(n, 0) = 1;
      for (int k = 1; k <= n; ++k) at(n, k) = at(n - 1, k - 1) + (k <= n - 1 ? at(n - 1, k) : 0);
    }
    return t;
  }();
  return table;
}

// Iterate all k-subsets of [n] as masks (Gosper's hack).
template <typename Fn>
void for_each_k_subset(int n, int k, Fn&& fn) {
  if (k < 0 || k > n) return;
  if (k == 0) {
    fn(std::uint64_t{0});
    return;
  }
  const std::uint64_t limit = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n);
  std::uint64_t v = (std::uint64_t{1} << k) - 1;
  while (v < limit) {
    fn(v);
    const std::uint64_t c = v & (~v + 1);
    const std::uint64_t r = v + c;
    if (r >= limit || r == 0) break;
    v = (((r ^ v) >> 2) / c) | r;
  }
}

void check_vertex_budget(int n) {
  if (n < 0 || n > 64) throw std::length_error("Hypergraph: vertex count exceeds 64");
}

}  // namespace

std::uint64_t binom(int n, int k) {
  if (k < 0 || k > n || n < 0) return 0;
  if (n > kMaxBinomN) throw std::length_error("binom: n exceeds the exact table");
  return binom_table()[n * (kMaxBinomN + 1) + k];
}

std::uint64_t binom_wide(long long n, int k) {
  if (k < 0 || k > n || n < 0) return 0;
  if (2 * k > n) k = static_cast<int>(n - k);
  u128 result = 1;
  for (int i = 1; i <= k; ++i) {
    result = result * static_cast<u128>(n - k + i) / static_cast<u128>(i);
    if (result > static_cast<u128>(~std::uint64_t{0}))
      throw std::overflow_error("binom_wide: result exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(result);
}

Hypergraph::Hypergraph(int n, std::vector<std::uint64_t> edges) : n_(n), edges_(std::move(edges)) {
  check_vertex_budget(n);
  const std::uint64_t full = n == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
  for (std::uint64_t e : edges_)
    if (e & ~full) throw std::invalid_argument("Hypergraph: edge uses a vertex beyond n");
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

bool Hypergraph::contains(std::uint64_t mask) const {
  return std::binary_search(edges_.begin(), edges_.end(), mask);
}

std::vector<std::uint64_t> Hypergraph::edges_of_size(int m) const {
  std::vector<std::uint64_t> out;
  for (std::uint64_t e : edges_)
    if (std::popcount(e) == m) out.push_back(e);
  return out;
}

std::size_t Hypergraph::edge_count_of_size(int m) const {
  std::size_t c = 0;
  for (std::uint64_t e : edges_)
    if (std::popcount(e) == m) ++c;
  return c;
}

double Hypergraph::beta(int m) const {
  const std::uint64_t total = binom(n_, m);
  if (total == 0) return 0.0;
  return static_cast<double>(edge_count_of_size(m)) / static_cast<double>(total);
}

bool Hypergraph::is_up_set() const {
  for (std::uint64_t e : edges_) {
    for (int i = 0; i < n_; ++i) {
      const std::uint64_t bit = std::uint64_t{1} << i;
      if (!(e & bit) && !contains(e | bit)) return false;
    }
  }
  return true;
}

Hypergraph Hypergraph::from_stream(std::istream& in) {
  std::string line;
  int n = -1;
  std::vector<std::uint64_t> edges;
  while (std::getline(in, line)) {
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    if (line[start] == '#') continue;
    std::istringstream row(line);
    if (n < 0) {
      if (!(row >> n)) throw std::runtime_error("Hypergraph: missing vertex count");
      check_vertex_budget(n);
      continue;
    }
    std::string tok;
    row >> tok;
    if (tok == "-") {
      edges.push_back(0);
      continue;
    }
    std::uint64_t mask = 0;
    int v = std::stoi(tok);
    do {
      if (v < 1 || v > n) throw std::runtime_error("Hypergraph: vertex out of range");
      mask |= std::uint64_t{1} << (v - 1);
    } while (row >> v);
    edges.push_back(mask);
  }
  if (n < 0) throw std::runtime_error("Hypergraph: empty input");
  return Hypergraph(n, std::move(edges));
}

void Hypergraph::to_stream(std::ostream& out) const {
  out << n_ << '\n';
  for (std::uint64_t e : edges_) {
    if (e == 0) {
      out << "-\n";
      continue;
    }
    bool first = true;
    for (int i = 0; i < n_; ++i) {
      if (e & (std::uint64_t{1} << i)) {
        if (!first) out << ' ';
        out << (i + 1);
        first = false;
      }
    }
    out << '\n';
  }
}

XmCount x_m(std::uint64_t S, const Hypergraph& h, int m) {
  XmCount out;
  for (std::uint64_t e : h.edges())
    if (std::popcount(e) == m && (e & ~S) == 0) ++out.x;
  const int s = std::popcount(S);
  const std::uint64_t denom = binom(s, m);
  if (denom == 0) {
    out.degenerate = h.edge_count_of_size(m) > 0;
    out.x_tilde = 0.0;
  } else {
    out.x_tilde = static_cast<double>(out.x) / static_cast<double>(denom);
  }
  return out;
}

double r_exact(const Hypergraph& h, std::uint64_t B, double p) {
  const int b = std::popcount(B);
  if (b > 22) throw std::length_error("r_exact: |B| exceeds the 2^|B| capacity guard");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("r_exact: p must lie in [0,1]");
  double total = 0.0;
  // Enumerate the submasks of B, including the empty set.
  std::uint64_t A = B;
  while (true) {
    if (h.contains(A))
      total += std::pow(p, std::popcount(A)) * std::pow(1.0 - p, b - std::popcount(A));
    if (A == 0) break;
    A = (A - 1) & B;
  }
  return total;
}

McEstimate r_monte_carlo(const Hypergraph& h, std::uint64_t B, double p, int samples,
                         RngStream rng) {
  if (samples < 1) throw std::invalid_argument("r_monte_carlo: samples must be >= 1");
  std::vector<int> bits;
  for (int i = 0; i < h.n(); ++i)
    if (B & (std::uint64_t{1} << i)) bits.push_back(i);
  std::uint64_t hits = 0;
  for (int s = 0; s < samples; ++s) {
    std::uint64_t A = 0;
    for (int i : bits)
      if (rng.bernoulli(p)) A |= std::uint64_t{1} << i;
    if (h.contains(A)) ++hits;
  }
  McEstimate est;
  est.samples = samples;
  est.value = static_cast<double>(hits) / samples;
  est.std_error = std::sqrt(std::max(est.value * (1.0 - est.value), 1e-12) / samples);
  return est;
}

std::vector<double> r_all_subsets(const Hypergraph& h, double p) {
  const int n = h.n();
  if (n > 22) throw std::length_error("r_all_subsets: n exceeds the capacity guard");
  std::vector<double> r(std::size_t{1} << n, 0.0);
  for (std::uint64_t e : h.edges()) r[e] = 1.0;
  // Fold one coordinate at a time:
  // r(B + i) = p r_prev(B + i) + (1-p) r_prev(B).
  for (int i = 0; i < n; ++i) {
    const std::size_t bit = std::size_t{1} << i;
    for (std::size_t base = 0; base < r.size(); ++base) {
      if (base & bit) continue;
      r[base | bit] = p * r[base | bit] + (1.0 - p) * r[base];
    }
  }
  return r;
}

VarXmResult var_xm_exact(const Hypergraph& h, int k, int m) {
  const int n = h.n();
  if (n > 22) throw std::length_error("var_xm_exact: n exceeds the enumeration guard");
  if (k < 0 || k > n || m < 0) throw std::invalid_argument("var_xm_exact: bad sizes");
  const auto hm = h.edges_of_size(m);

  u128 sum = 0, sum_sq = 0;
  std::uint64_t count = 0;
  for_each_k_subset(n, k, [&](std::uint64_t S) {
    std::uint64_t x = 0;
    for (std::uint64_t e : hm)
      if ((e & ~S) == 0) ++x;
    sum += x;
    sum_sq += static_cast<u128>(x) * x;
    ++count;
  });

  VarXmResult out;
  const long double c = static_cast<long double>(count);
  const long double mean = static_cast<long double>(sum) / c;
  out.variance = static_cast<double>(static_cast<long double>(sum_sq) / c - mean * mean);
  out.bound = 48.0 * m / static_cast<double>(k) * std::pow(static_cast<double>(binom(k, m)), 2);
  out.hyp_n_ge_3m3 = n >= 3 * m * m * m;
  out.hyp_n_ge_km_half = 2 * n >= k * m;
  return out;
}

std::uint64_t alpha_pairs(const Hypergraph& h, int m, int t) {
  const auto hm = h.edges_of_size(m);
  std::uint64_t pairs = 0;
  for (std::uint64_t e : hm)
    for (std::uint64_t f : hm)
      if (std::popcount(e & f) == t) ++pairs;
  return pairs;
}

std::uint64_t y_t(int k, int m, int t) {
  return binom(k, 2 * m - t) * binom(2 * m - t, m) * binom(m, t);
}

BeyResult bey_inequality_check(const Hypergraph& h, int m, int t) {
  if (t < 1 || t > m) throw std::invalid_argument("bey_inequality_check: t must lie in [1, m]");
  const int n = h.n();
  const auto hm = h.edges_of_size(m);
  const std::uint64_t e = hm.size();

  // d_2(H, t) = sum over ordered pairs (e, f) of C(|e cap f|, t).
  u128 lhs = 0;
  for (std::uint64_t a : hm)
    for (std::uint64_t b : hm) lhs += binom(std::popcount(a & b), t);

  // holds  <=>  lhs * C(n-1, t) <= C(m, t) C(m-1, t) e^2 + C(m-1, t-1) C(n-t-1, m-t) e C(n-1, t)
  const u128 cn1t = binom(n - 1, t);
  const u128 rhs_main = static_cast<u128>(binom(m, t)) * binom(m - 1, t) * e * e;
  const u128 rhs_lin = static_cast<u128>(binom(m - 1, t - 1)) * binom(n - t - 1, m - t) * e * cn1t;

  BeyResult out;
  out.holds = lhs * cn1t <= rhs_main + rhs_lin;
  out.lhs = static_cast<double>(lhs);
  out.rhs = cn1t == 0 ? std::numeric_limits<double>::infinity()
                      : static_cast<double>(rhs_main) / static_cast<double>(cn1t) +
                            static_cast<double>(static_cast<u128>(binom(m - 1, t - 1)) *
                                                binom(n - t - 1, m - t) * e);
  return out;
}

BinomIdentityReport binom_identities_check(int n, int k, int m, int t) {
  if (!(k >= m && m >= t && t >= 1)) throw std::invalid_argument("binom_identities_check: need k >= m >= t >= 1");
  BinomIdentityReport rep;
  rep.hyp_n_ge_3m3 = n >= 3 * m * m * m;

  rep.a_lhs = binom_wide(k, m) * binom_wide(k, m);
  rep.a_rhs = 0;
  for (int s = 0; s <= m; ++s)
    rep.a_rhs += binom_wide(k, 2 * m - s) * binom_wide(2 * m - s, m) * binom_wide(m, s);
  rep.a_equal = rep.a_lhs == rep.a_rhs;

  // (b): C(m-1, t) C(n, m)^2 <= C(n, 2m-t) C(2m-t, m) C(n-1, t)
  const u128 b_lhs = static_cast<u128>(binom_wide(m - 1, t)) * binom_wide(n, m) * binom_wide(n, m);
  const u128 b_rhs =
      static_cast<u128>(binom_wide(n, 2 * m - t)) * binom_wide(2 * m - t, m) * binom_wide(n - 1, t);
  rep.b_holds = b_lhs <= b_rhs;

  // (c): m C(m-1, t-1) C(n-t-1, m-t) C(n, m) <= 2t C(n, 2m-t) C(2m-t, m) C(m, t)
  const u128 c_lhs = static_cast<u128>(m) * binom_wide(m - 1, t - 1) *
                     binom_wide(n - t - 1, m - t) * binom_wide(n, m);
  const u128 c_rhs = static_cast<u128>(2 * t) * binom_wide(n, 2 * m - t) *
                     binom_wide(2 * m - t, m) * binom_wide(m, t);
  rep.c_holds = c_lhs <= c_rhs;
  return rep;
}

VarRFixedK var_r_fixed_k(const Hypergraph& h, int k, double p) {
  const int n = h.n();
  if (n > 22) throw std::length_error("var_r_fixed_k: n exceeds the enumeration guard");
  if (k < 0 || k > n) throw std::invalid_argument("var_r_fixed_k: bad k");

  long double sum = 0.0L, sum_sq = 0.0L;
  std::uint64_t count = 0;
  for_each_k_subset(n, k, [&](std::uint64_t S) {
    const long double r = r_exact(h, S, p);
    sum += r;
    sum_sq += r * r;
    ++count;
  });

  VarRFixedK out;
  const long double mean = sum / count;
  out.variance = static_cast<double>(sum_sq / count - mean * mean);
  out.bound = 96.0 * p + 4.0 * std::exp(-p * k / 16.0);
  const double pk = p * k;
  out.hyp_n_ge_24pk3 = n >= 24.0 * pk * pk * pk;
  out.hyp_n_ge_2pk2 = n >= 2.0 * p * k * k;
  return out;
}

namespace {

VarQR finish_var_qr(const Hypergraph& h, double q, double p, double mean, double var) {
  VarQR out;
  out.mean = mean;
  out.variance = var;
  // E_q[r_H(B, p)] equals the single-stage product law at density pq.
  const double pq = p * q;
  double m2 = 0.0;
  for (std::uint64_t e : h.edges())
    m2 += std::pow(pq, std::popcount(e)) * std::pow(1.0 - pq, h.n() - std::popcount(e));
  out.mean_product_law = m2;
  out.bound_p_log_sq = p * std::pow(std::log(1.0 / p), 2);
  return out;
}

}  // namespace

VarQR var_q_r(const Hypergraph& h, double q, double p) {
  const int n = h.n();
  if (n > 22) throw std::length_error("var_q_r: n exceeds the exact-mode guard");
  if (!(q >= 0.0 && q <= 1.0) || !(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("var_q_r: p, q must lie in [0,1]");

  const std::vector<double> r = r_all_subsets(h, p);
  double mean = 0.0, mean_sq = 0.0;
  for (std::size_t B = 0; B < r.size(); ++B) {
    const int b = std::popcount(static_cast<std::uint64_t>(B));
    const double w = std::pow(q, b) * std::pow(1.0 - q, n - b);
    mean += w * r[B];
    mean_sq += w * r[B] * r[B];
  }
  return finish_var_qr(h, q, p, mean, mean_sq - mean * mean);
}

VarQR var_q_r_mc(const Hypergraph& h, double q, double p, int samples, RngStream rng) {
  if (samples < 2) throw std::invalid_argument("var_q_r_mc: samples must be >= 2");
  const int n = h.n();
  long double sum = 0.0L, sum_sq = 0.0L;
  for (int s = 0; s < samples; ++s) {
    RngStream sub = rng.fork(s + 1);
    std::uint64_t B = 0;
    for (int i = 0; i < n; ++i)
      if (sub.bernoulli(q)) B |= std::uint64_t{1} << i;
    const double r = std::popcount(B) <= 22 ? r_exact(h, B, p)
                                            : r_monte_carlo(h, B, p, 4096, sub.fork(7)).value;
    sum += r;
    sum_sq += r * r;
  }
  const long double mean = sum / samples;
  const long double var = sum_sq / samples - mean * mean;
  return finish_var_qr(h, q, p, static_cast<double>(mean), static_cast<double>(var));
}

QuasiMonotoneReport quasi_monotone_dichotomy(const Hypergraph& h, double delta, int k, int m) {
  const int n = h.n();
  QuasiMonotoneReport rep;
  rep.quasi_monotone = true;
  const double need = (1.0 - delta) * static_cast<double>(binom(k, m));
  for (std::uint64_t e : h.edges_of_size(k)) {
    if (static_cast<double>(x_m(e, h, m).x) < need) {
      rep.quasi_monotone = false;
      break;
    }
  }
  rep.witness_c = 100.0 / (delta * delta);
  rep.branch_m_dense = static_cast<double>(h.edge_count_of_size(m)) >=
                       (1.0 - 2.0 * delta) * static_cast<double>(binom(n, m));
  rep.branch_k_sparse = static_cast<double>(h.edge_count_of_size(k)) <=
                        rep.witness_c * m / static_cast<double>(k) *
                            static_cast<double>(binom(n, k));
  rep.dichotomy_holds = !rep.quasi_monotone || rep.branch_m_dense || rep.branch_k_sparse;
  return rep;
}

}  // namespace perconoise
