#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "perconoise/sampling.hpp"

namespace perconoise {

// A coupled (before, after) pair; both marginals share one law.
struct NoisyPointPair {
  PointSet before;
  PointSet after;
  double epsilon = 0.0;
  std::uint64_t coupling_key = 0;
};

struct NoisyBitPair {
  std::vector<std::uint8_t> before;
  std::vector<std::uint8_t> after;
  double epsilon = 0.0;
  std::uint64_t coupling_key = 0;
};

// eta^eps: delete each point of eta independently with probability eps, then
// add a fresh Poisson(eps * lambda) configuration on the region. Survival,
// addition count and addition positions use separate substreams so each piece
// replays independently.
PointSet continuum_perturb(const PointSet& eta, double epsilon, double lambda,
                           const Rect& region, RngStream rng);

// Re-randomise each bit with probability eps; a re-randomised bit is redrawn
// Bernoulli(p) regardless of its old value.
std::vector<std::uint8_t> discrete_perturb(const std::vector<std::uint8_t>& omega,
                                           double epsilon, double p, RngStream rng);

// eps' = eps / (1 - p); the discrete noise level that makes re-randomising the
// second-stage inclusions match the continuum eps-perturbation.
double epsilon_prime(double epsilon, double p);

// Construction (a): eta ~ Poisson(lambda_c) with its eps-perturbation.
NoisyPointPair coupled_pair_continuum(double lambda_c, double epsilon, const Rect& region,
                                      RngStream rng);

// Construction (b): B ~ Poisson(lambda_c/p), eta the p-subset of B, and the
// partner obtained by re-randomising each inclusion bit with probability eps'.
struct TwoStageNoisyPair {
  PointSet parent;  // B
  PointSet before;  // eta
  PointSet after;   // eta^{eps'}
  double epsilon_prime = 0.0;
  std::uint64_t coupling_key = 0;
};
TwoStageNoisyPair coupled_pair_two_stage(double lambda_c, double p, double epsilon,
                                         const Rect& region, RngStream rng);

// Both constructions side by side (independent samples, equal in law).
std::pair<NoisyPointPair, TwoStageNoisyPair> coupled_pair_continuum_vs_two_stage(
    double lambda_c, double p, double epsilon, const Rect& region, RngStream rng);

}  // namespace perconoise
