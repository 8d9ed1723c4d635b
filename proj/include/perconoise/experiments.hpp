#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "perconoise/geometry.hpp"
#include "perconoise/stats.hpp"

namespace perconoise {

// Monte Carlo estimate of P(H(eta, R_N)) at intensity lambda. Replicate i
// always uses stream i, so the result is identical for every thread count.
Estimate crossing_probability(double N, double lambda, int replicates, std::uint64_t seed,
                              int threads);

// Bisection on lambda for crossing probability 1/2. The returned CI combines
// the final bracket with the binomial noise of the probe estimates mapped
// through the local slope.
struct ProbeRow {
  double lambda = 0.0;
  Estimate prob;
};
struct LambdaCResult {
  Estimate lambda_hat;
  std::vector<ProbeRow> probes;
};
LambdaCResult estimate_lambda_c(double N, int replicates_per_probe, double tol,
                                std::uint64_t seed, int threads, double bracket_lo = 0.05,
                                double bracket_hi = 1.5);

enum class NoiseMode { continuum, two_stage };

// Covariance E[f(eta) f(eta')] - E[f(eta)]^2 of the crossing indicator under
// either noise construction, with a jackknife CI. For two_stage, eps must be
// below 1 - p.
Estimate noise_covariance(double N, double lambda, double epsilon, int replicates,
                          NoiseMode mode, double p, std::uint64_t seed, int threads);

// Between-B variance of the inner crossing probability, corrected for the
// Monte Carlo noise of the inner estimates.
Estimate variance_across_B(double N, double p, double lambda_c, int outer, int inner,
                           std::uint64_t seed, int threads);

struct SweepRow {
  double alpha = 0.0;
  double N = 0.0;
  double epsilon = 0.0;
  Estimate covariance;
  bool consistent_with_vanishing = false;
};
std::vector<SweepRow> ns_exponent_sweep(const std::vector<double>& alphas,
                                        const std::vector<double>& n_grid, double lambda_c,
                                        int replicates, std::uint64_t seed, int threads);

// Declarative experiment description parsed from "key = value" lines.
struct ExperimentSpec {
  std::string kind;
  std::map<std::string, std::string> params;

  static ExperimentSpec parse_file(const std::string& path);
  static ExperimentSpec parse(std::istream& in);

  bool has(const std::string& key) const { return params.count(key) > 0; }
  double number(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;
  long integer(const std::string& key) const;
  long integer_or(const std::string& key, long fallback) const;
  std::uint64_t seed() const;
  std::vector<double> grid(const std::string& key) const;  // comma-separated
  std::string text_or(const std::string& key, const std::string& fallback) const;
};

// Executes the experiment and writes `<out>.csv` plus a JSON-lines mirror
// into out_dir. Outputs are byte-identical for any thread count.
void run_experiment(const ExperimentSpec& spec, const std::string& out_dir,
                    std::uint64_t seed_override, bool has_seed_override, int threads);

}  // namespace perconoise
