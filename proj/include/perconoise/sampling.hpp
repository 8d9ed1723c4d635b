#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "perconoise/geometry.hpp"
#include "perconoise/rng.hpp"

namespace perconoise {

// How a point configuration was produced, enough to replay it.
struct Provenance {
  std::uint64_t key = 0;  // RNG stream key that generated the set
  double intensity = std::numeric_limits<double>::quiet_NaN();  // Poisson intensity, if any
  double p = std::numeric_limits<double>::quiet_NaN();          // thinning probability, if any
  std::string parent;  // label of the parent set for thinned configurations
};

// A finite planar configuration (a Poisson sample or a thinned subset).
// Points are kept in generation order; order carries no meaning.
struct PointSet {
  std::vector<Vec2> points;
  Provenance prov;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

// Count-then-uniform: N ~ Poisson(intensity * area), then N i.i.d. uniform
// points in the region.
PointSet sample_poisson(const Rect& region, double intensity, RngStream rng);

// Keep each point independently with probability p.
PointSet p_subset(const PointSet& parent, double p, RngStream rng);

// Same law on an index set [n]; returns one inclusion flag per element.
std::vector<std::uint8_t> p_subset_bits(std::size_t n, double p, RngStream rng);

// B ~ Poisson(lambda_c / p) and eta a p-subset of B, so that eta is marginally
// Poisson(lambda_c).
struct TwoStageSample {
  PointSet parent;  // B
  PointSet thinned; // eta
};
TwoStageSample two_stage_sample(double lambda_c, double p, const Rect& region, RngStream rng);

// CSV replay format: "# seed <key> intensity <value>" header, then x,y rows.
void write_points_csv(const PointSet& ps, std::ostream& out);
PointSet read_points_csv(std::istream& in);

}  // namespace perconoise
