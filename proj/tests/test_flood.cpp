#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "perconoise/flood.hpp"
#include "perconoise/sampling.hpp"

using namespace perconoise;

namespace {

// Literal round-by-round reference: recompute the queried set of each round
// from the start line plus the full active set, no frontier bookkeeping.
FloodTrace batch_reference(std::span<const Vec2> B, const std::vector<std::uint8_t>& eta,
                           double N, FloodSide side) {
  FloodTrace trace;
  const double line_x = side == FloodSide::left ? -N / 2 : N / 2;
  const Segment line{{line_x, -(N + 2) / 2}, {line_x, (N + 2) / 2}};
  std::set<std::uint32_t> queried, active;
  while (true) {
    ++trace.rounds;
    std::set<std::uint32_t> next_queried;
    for (std::uint32_t i = 0; i < B.size(); ++i) {
      bool near = dist_point_segment(B[i], line) <= 2.0 + kGeomTol;
      for (std::uint32_t a : active)
        near = near || dist(B[i], B[a]) <= 2.0 + kGeomTol;
      if (near) next_queried.insert(i);
    }
    std::set<std::uint32_t> next_active;
    for (std::uint32_t i : next_queried)
      if (eta[i]) next_active.insert(i);
    queried = next_queried;
    if (next_active == active) break;
    active = next_active;
  }
  for (std::uint32_t i : queried) trace.queried.push_back(i);
  for (std::uint32_t i : active) trace.active_final.push_back(i);
  std::vector<Vec2> pts;
  for (std::uint32_t i : active) pts.push_back(B[i]);
  trace.output = occupied_horizontal_crossing(pts, Rect::centered(N, N));
  return trace;
}

std::set<std::uint32_t> as_set(const std::vector<std::uint32_t>& v) {
  return {v.begin(), v.end()};
}

}  // namespace

TEST_CASE("empty eta: one round, queried = near-line points, output 0") {
  const double N = 10;
  const PointSet B = sample_poisson(Rect::centered(N + 2, N + 2), 0.5, RngStream(1, 0));
  const std::vector<std::uint8_t> eta(B.size(), 0);
  const FloodTrace t = run_flood_query(B.points, eta, N, FloodSide::left);
  CHECK(t.rounds == 1);
  CHECK_FALSE(t.output);
  CHECK(t.active_final.empty());
  const Segment line{{-N / 2, -(N + 2) / 2}, {-N / 2, (N + 2) / 2}};
  std::set<std::uint32_t> expect;
  for (std::uint32_t i = 0; i < B.size(); ++i)
    if (dist_point_segment(B.points[i], line) <= 2.0 + kGeomTol) expect.insert(i);
  CHECK(as_set(t.queried) == expect);
}

TEST_CASE("a spanning chain gets fully wet and outputs 1") {
  const double N = 10;
  std::vector<Vec2> B;
  for (double x = -5.0; x <= 5.01; x += 1.9) B.push_back({x, 0.0});
  const std::vector<std::uint8_t> eta(B.size(), 1);
  const FloodTrace t = run_flood_query(B, eta, N, FloodSide::left);
  CHECK(t.output);
  CHECK(t.queried.size() == B.size());
  CHECK(t.active_final.size() == B.size());
}

TEST_CASE("output equals the crossing indicator on sampled configurations") {
  const double N = 20;
  int crossings = 0;
  for (int i = 0; i < 1000; ++i) {
    RngStream rng(5, i);
    const PointSet B = sample_poisson(Rect::centered(N + 2, N + 2), 0.6, rng.fork(1));
    const auto eta = p_subset_bits(B.size(), 0.6, rng.fork(2));
    std::vector<Vec2> eta_pts;
    for (std::size_t k = 0; k < B.size(); ++k)
      if (eta[k]) eta_pts.push_back(B.points[k]);
    const FloodTrace left = run_flood_query(B.points, eta, N, FloodSide::left);
    const FloodTrace right = run_flood_query(B.points, eta, N, FloodSide::right);
    const bool want = occupied_horizontal_crossing(eta_pts, Rect::centered(N, N));
    CHECK(left.output == want);
    CHECK(right.output == want);
    crossings += want;
  }
  CHECK(crossings > 100);
  CHECK(crossings < 900);
}

TEST_CASE("exhaustive determinacy for small B") {
  const double N = 5;
  for (int rep = 0; rep < 4; ++rep) {
    PointSet B = sample_poisson(Rect::centered(N + 2, N + 2), 0.3, RngStream(6, rep));
    if (B.size() > 13) B.points.resize(13);
    const std::size_t n = B.size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      std::vector<std::uint8_t> eta(n);
      std::vector<Vec2> pts;
      for (std::size_t i = 0; i < n; ++i) {
        eta[i] = (mask >> i) & 1;
        if (eta[i]) pts.push_back(B.points[i]);
      }
      const FloodTrace t = run_flood_query(B.points, eta, N, FloodSide::left);
      CHECK(t.output == occupied_horizontal_crossing(pts, Rect::centered(N, N)));
    }
  }
}

TEST_CASE("frontier implementation matches the literal batch rule") {
  const double N = 8;
  for (int rep = 0; rep < 30; ++rep) {
    RngStream rng(7, rep);
    const PointSet B = sample_poisson(Rect::centered(N + 2, N + 2), 0.4, rng.fork(1));
    const auto eta = p_subset_bits(B.size(), 0.5, rng.fork(2));
    const FloodTrace fast = run_flood_query(B.points, eta, N, FloodSide::left);
    const FloodTrace slow = batch_reference(B.points, eta, N, FloodSide::left);
    CHECK(fast.output == slow.output);
    CHECK(as_set(fast.queried) == as_set(slow.queried));
    CHECK(as_set(fast.active_final) == as_set(slow.active_final));
  }
}

TEST_CASE("trace structure: monotone rounds, reachability, termination") {
  const double N = 12;
  for (int rep = 0; rep < 50; ++rep) {
    RngStream rng(8, rep);
    const PointSet B = sample_poisson(Rect::centered(N + 2, N + 2), 0.5, rng.fork(1));
    const auto eta = p_subset_bits(B.size(), 0.5, rng.fork(2));
    const FloodTrace t = run_flood_query(B.points, eta, N, FloodSide::left);

    CHECK(t.rounds <= static_cast<int>(B.size()) + 1);
    CHECK(t.rounds == static_cast<int>(t.round_queried.size()));

    // No point queried twice; active points are queried points holding eta.
    std::set<std::uint32_t> seen;
    for (std::uint32_t i : t.queried) CHECK(seen.insert(i).second);
    const auto queried_set = as_set(t.queried);
    for (std::uint32_t i : t.active_final) {
      CHECK(queried_set.count(i) == 1);
      CHECK(eta[i] == 1);
    }

    // Every queried point is within reach of the start line or an active one.
    const Segment line{{-N / 2, -(N + 2) / 2}, {-N / 2, (N + 2) / 2}};
    for (std::uint32_t i : t.queried) {
      bool reachable = dist_point_segment(B.points[i], line) <= 2.0 + kGeomTol;
      for (std::uint32_t a : t.active_final)
        reachable = reachable || dist(B.points[i], B.points[a]) <= 2.0 + kGeomTol;
      CHECK(reachable);
    }

    // Rounds after the first only query neighbourhoods of earlier actives.
    for (std::size_t r = 1; r < t.round_queried.size(); ++r) {
      std::vector<std::uint32_t> earlier;
      for (std::size_t s = 0; s + 1 <= r; ++s)
        earlier.insert(earlier.end(), t.round_active[s].begin(), t.round_active[s].end());
      for (std::uint32_t i : t.round_queried[r]) {
        bool near = false;
        for (std::uint32_t a : earlier)
          near = near || dist(B.points[i], B.points[a]) <= 2.0 + kGeomTol;
        CHECK(near);
      }
    }
  }
}

TEST_CASE("trace exports to JSON") {
  const double N = 6;
  const PointSet B = sample_poisson(Rect::centered(N + 2, N + 2), 0.5, RngStream(9, 0));
  const auto eta = p_subset_bits(B.size(), 0.5, RngStream(9, 1));
  const FloodTrace t = run_flood_query(B.points, eta, N, FloodSide::left);
  const auto j = nlohmann::json::parse(trace_to_json(t));
  CHECK(j["rounds"].get<int>() == t.rounds);
  CHECK(j["queried"].size() == t.queried.size());
  CHECK(j["round_queried"].size() == t.round_queried.size());
}

TEST_CASE("revealment: near-line points are certain, far points silent at p = 0") {
  const double N = 12;
  std::vector<Vec2> B{{-6.5, 0.0}, {0.0, 0.0}, {5.0, 3.0}};
  const auto est = revealment_estimate(B, 0.0, N, RevealRegion::all, 200, RngStream(10, 0));
  REQUIRE(est.point_index.size() == 3);
  // Point 0 sits within distance 2 of the right-start line x = +6? No: it is
  // in the left half, measured under the right-started flood, far from it.
  for (std::size_t k = 0; k < est.point_index.size(); ++k) {
    const Vec2 v = B[est.point_index[k]];
    const double line_x = v.x >= 0.0 ? -N / 2 : N / 2;
    const double d = std::abs(v.x - line_x);
    if (d <= 2.0)
      CHECK(est.probability[k] == doctest::Approx(1.0));
    else
      CHECK(est.probability[k] == doctest::Approx(0.0));
  }
}

TEST_CASE("revealment: a point within reach of the start line is always queried") {
  const double N = 12;
  std::vector<Vec2> B{{5.0, 1.0}, {4.3, 2.0}, {0.0, 0.0}};
  // Right-half region measured under the left flood; add a point near the
  // LEFT line so it is queried in round 1 of the left flood, but that point
  // is in the left half, so measure the left half under the right flood too.
  B.push_back({-5.9, 0.0});
  const auto est = revealment_estimate(B, 0.3, N, RevealRegion::all, 300, RngStream(11, 0));
  // B[3] at x = -5.9: |(-5.9) - (+6)| = 11.9 > 2, so not round-1 under the
  // right flood; just sanity-check probabilities are within [0, 1].
  for (double pr : est.probability) {
    CHECK(pr >= 0.0);
    CHECK(pr <= 1.0);
  }
  CHECK(est.max_probability <= 1.0);
  CHECK(est.replicates == 300);
}

TEST_CASE("one-arm probability at the extremes") {
  const double ell = 4.0;
  const Rect region = Rect::centered(4 * ell + 2, 4 * ell + 2);
  const PointSet B = sample_poisson(region, 1.0, RngStream(12, 0));
  CHECK(one_arm_probability(B.points, 0.0, {0, 0}, ell, 100, RngStream(12, 1)) == 0.0);

  // A deterministic radial chain with p = 1 always connects the faces.
  std::vector<Vec2> chain;
  for (double x = ell; x <= 2 * ell + 0.01; x += 1.9) chain.push_back({x, 0.0});
  CHECK(one_arm_probability(chain, 1.0, {0, 0}, ell, 10, RngStream(12, 2)) == 1.0);
}

TEST_CASE("vacant circuit in a separating annulus blocks the query") {
  // Coupled runs: whenever the circuit event holds for an annulus whose outer
  // square clears the start strip, the surrounded point is not queried.
  const double N = 20, ell = 4.0;
  const Vec2 center{5.0, 0.0};
  const Annulus ann(center, ell);
  int circuits = 0, queried_with_circuit = 0;
  for (int i = 0; i < 300; ++i) {
    RngStream rng(13, i);
    PointSet B = sample_poisson(Rect::centered(N + 2, N + 2), 0.6, rng.fork(1));
    B.points.push_back(center);  // the watched point v
    const std::uint32_t v = static_cast<std::uint32_t>(B.size() - 1);
    auto eta = p_subset_bits(B.size(), 0.35, rng.fork(2));

    std::vector<Vec2> eta_pts;
    for (std::size_t k = 0; k < B.size(); ++k)
      if (eta[k]) eta_pts.push_back(B.points[k]);
    const bool circuit = annulus_vacant_circuit(eta_pts, ann);
    if (!circuit) continue;
    ++circuits;
    const FloodTrace t = run_flood_query(B.points, eta, N, FloodSide::left);
    for (std::uint32_t q : t.queried) queried_with_circuit += q == v;
  }
  CHECK(circuits > 20);  // the regime produces plenty of circuits
  CHECK(queried_with_circuit == 0);
}

TEST_CASE("revealment is bounded by the no-circuit probability on shared seeds") {
  const double N = 20, ell = 4.0;
  const Vec2 center{5.0, 0.0};
  const Annulus ann(center, ell);
  const int reps = 400;
  RngStream rng(14, 0);
  PointSet B = sample_poisson(Rect::centered(N + 2, N + 2), 0.6, rng.fork(1));
  B.points.push_back(center);
  const std::uint32_t v = static_cast<std::uint32_t>(B.size() - 1);

  int queried = 0, no_circuit = 0;
  for (int r = 0; r < reps; ++r) {
    const auto eta = p_subset_bits(B.size(), 0.35, rng.fork(100 + r));
    std::vector<Vec2> eta_pts;
    for (std::size_t k = 0; k < B.size(); ++k)
      if (eta[k]) eta_pts.push_back(B.points[k]);
    no_circuit += !annulus_vacant_circuit(eta_pts, ann);
    const FloodTrace t = run_flood_query(B.points, eta, N, FloodSide::left);
    for (std::uint32_t q : t.queried)
      if (q == v) ++queried;
  }
  const double rev = queried / double(reps);
  const double bound = no_circuit / double(reps);
  CHECK(rev <= bound + 3.0 * std::sqrt(bound * (1 - bound) / reps) + 1e-9);
}
