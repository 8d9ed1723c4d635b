#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "perconoise/geometry.hpp"
#include "perconoise/rng.hpp"

namespace perconoise {

// Which vertical line the flood starts from: x = -N/2 (left) or x = +N/2.
enum class FloodSide { left, right };

// Record of one flood run. Point indices refer to positions in B.
// `round_queried[k]` / `round_active[k]` hold the points first queried /
// activated in round k+1; `queried` and `active_final` are the cumulative
// sets, in first-seen order.
struct FloodTrace {
  std::vector<std::uint32_t> queried;
  std::vector<std::vector<std::uint32_t>> round_queried;
  std::vector<std::vector<std::uint32_t>> round_active;
  std::vector<std::uint32_t> active_final;
  int rounds = 0;
  bool output = false;
};

// Determines the horizontal crossing of R_N by flooding from one side.
// Round 1 queries the points of B within distance 2 of the start line
// (restricted to its segment inside R_{N+2}; only those points exist); each
// later round queries the points within distance 2 of the set activated so
// far. A queried point becomes active when eta holds it. The run stops at the
// first round that activates nothing new, and the output is the occupied
// horizontal crossing of R_N by the active set.
FloodTrace run_flood_query(std::span<const Vec2> B, const std::vector<std::uint8_t>& eta,
                           double N, FloodSide side, double tol = kGeomTol);

std::string trace_to_json(const FloodTrace& trace);

enum class RevealRegion { right_half, left_half, all };

// Per-point query frequencies over fresh p-subsets of B. Points in the right
// half of R_{N+2} are measured under the left-started flood and points in the
// left half under the right-started one.
struct RevealmentEstimate {
  std::vector<std::uint32_t> point_index;  // indices into B, the measured region
  std::vector<double> probability;         // query frequency per point
  double max_probability = 0.0;
  int replicates = 0;
};
RevealmentEstimate revealment_estimate(std::span<const Vec2> B, double p, double N,
                                       RevealRegion region, int replicates, RngStream rng);

// Probability, over p-subsets eta of B, that the inner face of the annulus is
// joined to the outer face by discs of eta (the complement of the vacant
// circuit event).
double one_arm_probability(std::span<const Vec2> B, double p, Vec2 square_center, double ell,
                           int replicates, RngStream rng);

}  // namespace perconoise
