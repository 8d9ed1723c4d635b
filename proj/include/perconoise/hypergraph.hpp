#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "perconoise/rng.hpp"

namespace perconoise {

// Exact binomial coefficient; n <= 64, 0 for k < 0 or k > n.
std::uint64_t binom(int n, int k);

// Exact binomial for arbitrary n when the result fits 64 bits (multiplicative
// evaluation; intended for small k).
std::uint64_t binom_wide(long long n, int k);

// An arbitrary collection of subsets of [n] (an event on {0,1}^n). Vertex i
// corresponds to bit i-1 of an edge mask. Edges are kept sorted and unique.
class Hypergraph {
 public:
  Hypergraph() = default;
  Hypergraph(int n, std::vector<std::uint64_t> edges);

  int n() const { return n_; }
  const std::vector<std::uint64_t>& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }
  bool contains(std::uint64_t mask) const;

  std::vector<std::uint64_t> edges_of_size(int m) const;
  std::size_t edge_count_of_size(int m) const;
  // beta_m = e(H_m) / C(n, m).
  double beta(int m) const;
  bool is_up_set() const;

  // Text format: first line n, then one edge per line as sorted 1-based
  // vertex indices. Blank lines and lines starting with '#' are skipped;
  // a lone "-" denotes the empty edge.
  static Hypergraph from_stream(std::istream& in);
  void to_stream(std::ostream& out) const;

 private:
  int n_ = 0;
  std::vector<std::uint64_t> edges_;
};

// X_m(S) and its normalised form X_m(S) / C(|S|, m).
struct XmCount {
  std::uint64_t x = 0;
  double x_tilde = 0.0;
  bool degenerate = false;  // m > |S| while H_m is non-empty
};
XmCount x_m(std::uint64_t S, const Hypergraph& h, int m);

// r_H(B, p) = P(A in H) for a p-subset A of B, by exact subset summation
// (|B| <= 22) or seeded Monte Carlo.
double r_exact(const Hypergraph& h, std::uint64_t B, double p);
struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  int samples = 0;
};
McEstimate r_monte_carlo(const Hypergraph& h, std::uint64_t B, double p, int samples,
                         RngStream rng);

// r_H(B, p) for every B at once via the per-coordinate inclusion transform;
// n <= 22. Index = subset mask.
std::vector<double> r_all_subsets(const Hypergraph& h, double p);

// Exact Var(X_m(B_k)) over uniform k-subsets, with the (48m/k) C(k,m)^2 bound
// and its hypothesis flags.
struct VarXmResult {
  double variance = 0.0;
  double bound = 0.0;
  bool hyp_n_ge_3m3 = false;
  bool hyp_n_ge_km_half = false;
};
VarXmResult var_xm_exact(const Hypergraph& h, int k, int m);

// Exact degree-square sum d_2(H_m, t) against its extremal bound. The verdict
// is computed in exact integer arithmetic.
struct BeyResult {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};
BeyResult bey_inequality_check(const Hypergraph& h, int m, int t);

// Number of ordered pairs (e, f) of m-edges with |e intersect f| = t.
std::uint64_t alpha_pairs(const Hypergraph& h, int m, int t);
// Y_t(k, m) = C(k, 2m-t) C(2m-t, m) C(m, t).
std::uint64_t y_t(int k, int m, int t);

// The three binomial relations behind the fixed-size variance bound:
// (a) is an exact identity; (b) and (c) hold under n >= 3m^3.
struct BinomIdentityReport {
  std::uint64_t a_lhs = 0, a_rhs = 0;
  bool a_equal = false;
  bool b_holds = false;
  bool c_holds = false;
  bool hyp_n_ge_3m3 = false;
};
BinomIdentityReport binom_identities_check(int n, int k, int m, int t);

// Exact Var(r_H(B_k, p)) over uniform k-subsets against 96p + 4 exp(-pk/16).
struct VarRFixedK {
  double variance = 0.0;
  double bound = 0.0;
  bool hyp_n_ge_24pk3 = false;
  bool hyp_n_ge_2pk2 = false;
};
VarRFixedK var_r_fixed_k(const Hypergraph& h, int k, double p);

// Var over a q-subset B of [n] of r_H(B, p), exact (n <= 22) or Monte Carlo,
// together with the mean and the product-law value P_{pq}(A in H) that the
// mean must equal exactly.
struct VarQR {
  double variance = 0.0;
  double mean = 0.0;
  double mean_product_law = 0.0;
  double bound_p_log_sq = 0.0;  // p (log 1/p)^2, the shape the bound is fitted against
};
VarQR var_q_r(const Hypergraph& h, double q, double p);
VarQR var_q_r_mc(const Hypergraph& h, double q, double p, int samples, RngStream rng);

// delta-quasi monotone dichotomy: every k-edge carries at least a
// (1-delta)-fraction of its m-subsets as m-edges, and then either H_m is
// nearly complete or H_k is sparse (witness C recorded).
struct QuasiMonotoneReport {
  bool quasi_monotone = false;
  double witness_c = 0.0;
  bool branch_m_dense = false;
  bool branch_k_sparse = false;
  bool dichotomy_holds = false;
};
QuasiMonotoneReport quasi_monotone_dichotomy(const Hypergraph& h, double delta, int k, int m);

}  // namespace perconoise
