#include "perconoise/flood.hpp"

#include <stdexcept>

#include <nlohmann/json.hpp>

#include "perconoise/sampling.hpp"

namespace perconoise {

FloodTrace run_flood_query(std::span<const Vec2> B, const std::vector<std::uint8_t>& eta,
                           double N, FloodSide side, double tol) {
  if (eta.size() != B.size())
    throw std::invalid_argument("run_flood_query: eta must assign one bit per point of B");

  FloodTrace trace;
  const std::size_t n = B.size();
  const double line_x = side == FloodSide::left ? -N / 2 : N / 2;
  const double half_pad = (N + 2) / 2;
  const Segment start_line{{line_x, -half_pad}, {line_x, half_pad}};

  SpatialGrid grid(B, 2.0 + 2 * tol);
  std::vector<std::uint8_t> queried(n, 0);
  const double reach = 2.0 + tol;

  // Round 1: everything the start line can wet directly.
  std::vector<std::uint32_t> new_queried;
  for (std::size_t i = 0; i < n; ++i) {
    if (dist_point_segment(B[i], start_line) <= reach) {
      queried[i] = 1;
      new_queried.push_back(static_cast<std::uint32_t>(i));
    }
  }

  while (true) {
    ++trace.rounds;
    std::vector<std::uint32_t> new_active;
    for (std::uint32_t i : new_queried)
      if (eta[i]) new_active.push_back(i);

    trace.queried.insert(trace.queried.end(), new_queried.begin(), new_queried.end());
    trace.round_queried.push_back(std::move(new_queried));
    trace.round_active.push_back(new_active);
    trace.active_final.insert(trace.active_final.end(), new_active.begin(), new_active.end());

    if (new_active.empty()) break;  // A_k = A_{k-1}

    new_queried.clear();
    for (std::uint32_t a : new_active) {
      grid.for_candidates(B[a], [&](std::uint32_t j) {
        if (queried[j]) return;
        if (dist_sq(B[a], B[j]) <= reach * reach) {
          queried[j] = 1;
          new_queried.push_back(j);
        }
      });
    }
  }

  std::vector<Vec2> active_pts;
  active_pts.reserve(trace.active_final.size());
  for (std::uint32_t i : trace.active_final) active_pts.push_back(B[i]);
  trace.output = occupied_horizontal_crossing(active_pts, Rect::centered(N, N), tol);
  return trace;
}

std::string trace_to_json(const FloodTrace& trace) {
  nlohmann::json j;
  j["rounds"] = trace.rounds;
  j["output"] = trace.output ? 1 : 0;
  j["queried"] = trace.queried;
  j["active_final"] = trace.active_final;
  j["round_queried"] = trace.round_queried;
  j["round_active"] = trace.round_active;
  return j.dump();
}

RevealmentEstimate revealment_estimate(std::span<const Vec2> B, double p, double N,
                                       RevealRegion region, int replicates, RngStream rng) {
  if (replicates < 1) throw std::invalid_argument("revealment_estimate: replicates must be >= 1");
  const std::size_t n = B.size();
  const double half_pad = (N + 2) / 2;

  auto in_right = [&](Vec2 v) {
    return v.x >= 0.0 && std::abs(v.x) <= half_pad && std::abs(v.y) <= half_pad;
  };
  auto in_left = [&](Vec2 v) {
    return v.x < 0.0 && std::abs(v.x) <= half_pad && std::abs(v.y) <= half_pad;
  };

  const bool want_right = region != RevealRegion::left_half;
  const bool want_left = region != RevealRegion::right_half;

  std::vector<std::uint64_t> counts(n, 0);
  for (int r = 0; r < replicates; ++r) {
    const std::vector<std::uint8_t> eta = p_subset_bits(n, p, rng.fork(r + 1));
    if (want_right) {
      const FloodTrace t = run_flood_query(B, eta, N, FloodSide::left);
      for (std::uint32_t i : t.queried)
        if (in_right(B[i])) ++counts[i];
    }
    if (want_left) {
      const FloodTrace t = run_flood_query(B, eta, N, FloodSide::right);
      for (std::uint32_t i : t.queried)
        if (in_left(B[i])) ++counts[i];
    }
  }

  RevealmentEstimate est;
  est.replicates = replicates;
  for (std::size_t i = 0; i < n; ++i) {
    const bool measured = (want_right && in_right(B[i])) || (want_left && in_left(B[i]));
    if (!measured) continue;
    est.point_index.push_back(static_cast<std::uint32_t>(i));
    const double freq = static_cast<double>(counts[i]) / replicates;
    est.probability.push_back(freq);
    est.max_probability = std::max(est.max_probability, freq);
  }
  return est;
}

double one_arm_probability(std::span<const Vec2> B, double p, Vec2 square_center, double ell,
                           int replicates, RngStream rng) {
  if (replicates < 1) throw std::invalid_argument("one_arm_probability: replicates must be >= 1");
  const Annulus ann(square_center, ell);
  std::uint64_t connected = 0;
  for (int r = 0; r < replicates; ++r) {
    const std::vector<std::uint8_t> bits = p_subset_bits(B.size(), p, rng.fork(r + 1));
    std::vector<Vec2> eta;
    for (std::size_t i = 0; i < B.size(); ++i)
      if (bits[i]) eta.push_back(B[i]);
    if (!annulus_vacant_circuit(eta, ann)) ++connected;
  }
  return static_cast<double>(connected) / replicates;
}

}  // namespace perconoise
