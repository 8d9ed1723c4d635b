#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "perconoise/rng.hpp"

namespace perconoise {

// Truth table of f : {0,1}^n -> [0,1] under the p-biased product measure.
// Coordinate i of omega is bit (i-1) of the table index; subsets S of [n] use
// the same encoding.
class BooleanFn {
 public:
  static constexpr int kMaxN = 24;

  BooleanFn(int n, double p);
  BooleanFn(int n, double p, std::vector<double> table);

  int n() const { return n_; }
  double p() const { return p_; }
  std::size_t table_size() const { return table_.size(); }
  double operator()(std::uint32_t omega) const { return table_[omega]; }
  double& value(std::uint32_t omega) { return table_[omega]; }
  const std::vector<double>& table() const { return table_; }

  // E_p[f], computed exactly from the table.
  double mean() const;
  double mean_square() const;
  // Pairwise domination up to round-off accumulated by the transforms.
  bool is_monotone(double tol = 1e-12) const;

  static BooleanFn constant(int n, double p, double c);
  static BooleanFn dictator(int n, double p, int i = 1);
  static BooleanFn parity(int n, double p);
  // Indicator of "strictly more ones than zeros among [n]".
  static BooleanFn majority_indicator(int n, double p);

  // Text format: header "n p", then 2^n values, one per line, in
  // lexicographic omega order (omega_1 is the most significant position).
  static BooleanFn from_stream(std::istream& in);
  void to_stream(std::ostream& out) const;

 private:
  int n_;
  double p_;
  std::vector<double> table_;
};

// chi_S^p(omega): the p-biased character of the set S.
double chi(std::uint32_t S, std::uint32_t omega, double p);

// All coefficients f_hat^p(S) = E_p[f chi_S^p], dense over subset masks.
struct Spectrum {
  int n = 0;
  double p = 0.5;
  std::vector<double> coef;

  double operator()(std::uint32_t S) const { return coef[S]; }
  double sum_squares_nonempty() const;
  double level_mass(int k) const;  // sum over |S| = k of coef^2
};

Spectrum spectrum(const BooleanFn& f);
double reconstruct(const Spectrum& spec, std::uint32_t omega);
BooleanFn reconstruct_all(const Spectrum& spec);

// Noise correlation E_p[f(omega) f(omega^eps)] - E_p[f]^2, by two independent
// routes that must agree: the spectral sum over non-empty S of
// f_hat(S)^2 (1-eps)^{|S|}, and direct integration of the re-randomisation
// kernel (no Fourier step).
struct NoiseCorrelation {
  double spectral = 0.0;
  double direct = 0.0;
};
NoiseCorrelation noise_correlation_exact(const BooleanFn& f, double epsilon);

double influence(const BooleanFn& f, int i);  // i in [1, n]
std::vector<double> influences(const BooleanFn& f);
double ii_p(const BooleanFn& f);  // sum of squared influences

// h_f at density 1/2: h_f(X) = E[f(Z) | X] where Z couples the p-biased cube
// to the uniform one (Z_i = X_i Y_i for p <= 1/2, Z_i = 1-(1-X_i)Y_i above).
BooleanFn h_transform(const BooleanFn& f);

// Sign of sum over i in K of (2 X_i - 1); 0 on ties and for empty K.
int majority_sign(std::uint32_t K, std::uint32_t X);

// E[f(Z) M_K(X)] via h_f (2^n work after the transform).
double fz_mk_correlation(const BooleanFn& f, std::uint32_t K);
// The same by direct summation over the (X, Y) pairs; n <= 12.
double fz_mk_correlation_xy(const BooleanFn& f, std::uint32_t K);

// Lambda(h_f) = max over K of E[h_f(X) M_K(X)]; n <= 16.
struct LambdaHf {
  double value = 0.0;
  std::uint32_t argmax = 0;
};
LambdaHf lambda_hf(const BooleanFn& f);

// Maximum of sum c_i^2 over non-increasing non-negative c dominated by the
// prefix sums of a; the maximum is attained at c = a. `certify` attacks the
// claim with random feasible candidates.
struct PrefixSqMax {
  double value = 0.0;            // sum a_i^2
  double best_candidate = 0.0;   // best sum c_i^2 found by search
  bool certified = false;        // no candidate beat the claimed maximum
};
PrefixSqMax prefix_constrained_sq_max(std::span<const double> a, int candidates, RngStream rng);

// Query-order models for the level-mass/revealment bound at p = 1/2.
struct QueryOrderSpec {
  enum class Kind { fixed_order, all_permutations } kind = Kind::all_permutations;
  std::vector<int> order;  // for fixed_order: a permutation of [1, n]
};

// Checks sum_{|S|=k} f_hat(S)^2 <= k ||f||_2^2 delta for every k, where delta
// is the exact revealment of the early-stopping query algorithm (enumerating
// all inputs and, for all_permutations, all n! orders; n <= 8 there, n <= 12
// for a fixed order).
struct SsBoundReport {
  std::vector<double> level_mass;   // index k-1
  std::vector<double> bound;        // k * ||f||^2 * delta
  std::vector<double> delta_per_bit;
  double revealment = 0.0;
  bool holds_for_all_k = false;
};
SsBoundReport ss_bound_check(const BooleanFn& f, const QueryOrderSpec& algorithm);

}  // namespace perconoise
