#include "perconoise/noise.hpp"

#include <stdexcept>

namespace perconoise {

PointSet continuum_perturb(const PointSet& eta, double epsilon, double lambda,
                           const Rect& region, RngStream rng) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0))
    throw std::invalid_argument("continuum_perturb: epsilon must lie in [0,1]");
  if (!(lambda > 0.0)) throw std::invalid_argument("continuum_perturb: lambda must be positive");

  RngStream survival = rng.fork(1);
  RngStream additions = rng.fork(2);

  PointSet out;
  out.prov.key = rng.key();
  out.prov.intensity = lambda;
  out.prov.parent = "perturbed";
  for (const Vec2& pt : eta.points)
    if (!survival.bernoulli(epsilon)) out.points.push_back(pt);
  const PointSet fresh = sample_poisson(region, epsilon * lambda, additions);
  out.points.insert(out.points.end(), fresh.points.begin(), fresh.points.end());
  return out;
}

std::vector<std::uint8_t> discrete_perturb(const std::vector<std::uint8_t>& omega,
                                           double epsilon, double p, RngStream rng) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0))
    throw std::invalid_argument("discrete_perturb: epsilon must lie in [0,1]");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("discrete_perturb: p must lie in [0,1]");
  std::vector<std::uint8_t> out(omega.size());
  for (std::size_t i = 0; i < omega.size(); ++i) {
    out[i] = rng.bernoulli(epsilon) ? (rng.bernoulli(p) ? 1 : 0) : omega[i];
  }
  return out;
}

double epsilon_prime(double epsilon, double p) {
  if (!(p >= 0.0 && p < 1.0)) throw std::invalid_argument("epsilon_prime: p must lie in [0,1)");
  if (!(epsilon >= 0.0 && epsilon < 1.0 - p))
    throw std::invalid_argument("epsilon_prime: epsilon must lie in [0, 1-p)");
  return epsilon / (1.0 - p);
}

NoisyPointPair coupled_pair_continuum(double lambda_c, double epsilon, const Rect& region,
                                      RngStream rng) {
  NoisyPointPair pair;
  pair.epsilon = epsilon;
  pair.coupling_key = rng.key();
  pair.before = sample_poisson(region, lambda_c, rng.fork(1));
  pair.after = continuum_perturb(pair.before, epsilon, lambda_c, region, rng.fork(2));
  return pair;
}

TwoStageNoisyPair coupled_pair_two_stage(double lambda_c, double p, double epsilon,
                                         const Rect& region, RngStream rng) {
  const double eps_prime = epsilon_prime(epsilon, p);
  TwoStageNoisyPair pair;
  pair.epsilon_prime = eps_prime;
  pair.coupling_key = rng.key();
  pair.parent = sample_poisson(region, lambda_c / p, rng.fork(1));

  RngStream first = rng.fork(2);
  RngStream rerand = rng.fork(3);
  pair.before.prov.key = first.key();
  pair.before.prov.p = p;
  pair.after.prov.key = rerand.key();
  pair.after.prov.p = p;
  for (const Vec2& pt : pair.parent.points) {
    const bool bit = first.bernoulli(p);
    // Re-randomise the inclusion with probability eps'.
    const bool bit2 = rerand.bernoulli(eps_prime) ? rerand.bernoulli(p) : bit;
    if (bit) pair.before.points.push_back(pt);
    if (bit2) pair.after.points.push_back(pt);
  }
  return pair;
}

std::pair<NoisyPointPair, TwoStageNoisyPair> coupled_pair_continuum_vs_two_stage(
    double lambda_c, double p, double epsilon, const Rect& region, RngStream rng) {
  return {coupled_pair_continuum(lambda_c, epsilon, region, rng.fork(10)),
          coupled_pair_two_stage(lambda_c, p, epsilon, region, rng.fork(20))};
}

}  // namespace perconoise
