#include "perconoise/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "perconoise/parallel.hpp"

namespace perconoise {

Lattice Lattice::make(double a, double b, double delta) {
  if (!(a > 0.0) || !(b > 0.0) || !(delta > 0.0))
    throw std::invalid_argument("Lattice: a, b, delta must be positive");
  Lattice lat;
  lat.a = a;
  lat.b = b;
  lat.delta = delta;
  // Smallest K with (K + 1/2) delta >= (side + 2) / 2, so the cells cover the
  // padded rectangle.
  auto half_extent = [delta](double side) {
    const double target = (side + 2.0) / 2.0;
    const long long k = static_cast<long long>(std::ceil(target / delta - 0.5 - 1e-12));
    return std::max(k, 0LL);
  };
  lat.kx = half_extent(a);
  lat.ky = half_extent(b);
  return lat;
}

Vec2 Lattice::site(long long index) const {
  const long long j = index / nx() - ky;
  const long long i = index % nx() - kx;
  return {static_cast<double>(i) * delta, static_cast<double>(j) * delta};
}

std::pair<long long, long long> Lattice::cell_of(Vec2 p) const {
  return {static_cast<long long>(std::floor(p.x / delta + 0.5)),
          static_cast<long long>(std::floor(p.y / delta + 0.5))};
}

long long Lattice::snap_index(Vec2 p) const {
  const auto [i, j] = cell_of(p);
  if (i < -kx || i > kx || j < -ky || j > ky)
    throw std::invalid_argument("Lattice::snap_index: point outside the covered region");
  return site_index(i, j);
}

Vec2 Lattice::snap_point(Vec2 p) const {
  const auto [i, j] = cell_of(p);
  return {static_cast<double>(i) * delta, static_cast<double>(j) * delta};
}

Rect Lattice::covered_region() const {
  return Rect({0.0, 0.0}, (2 * kx + 1) * delta, (2 * ky + 1) * delta);
}

double q_of(double delta, double p, double lambda_c) {
  if (!(delta > 0.0) || !(lambda_c > 0.0) || !(p > 0.0 && p <= 1.0))
    throw std::invalid_argument("q_of: need delta > 0, lambda_c > 0, p in (0,1]");
  return 1.0 - std::exp(-lambda_c * delta * delta / p);
}

std::vector<long long> snap(const PointSet& B, const Lattice& lat) {
  std::vector<long long> sites;
  sites.reserve(B.size());
  for (const Vec2& pt : B.points) sites.push_back(lat.snap_index(pt));
  std::sort(sites.begin(), sites.end());
  sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
  return sites;
}

BadEvent bad_event(std::span<const Vec2> B, double delta, const Rect& rect) {
  BadEvent ev;
  // (a) two points in one cell
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(B.size() * 2);
  for (const Vec2& p : B) {
    const long long ci = static_cast<long long>(std::floor(p.x / delta + 0.5));
    const long long cj = static_cast<long long>(std::floor(p.y / delta + 0.5));
    const std::uint64_t key =
        (static_cast<std::uint64_t>(ci + (1LL << 31)) << 32) ^ static_cast<std::uint64_t>(cj + (1LL << 31));
    if (!seen.insert(key).second) {
      ev.occurred = true;
      ev.which = BadEventKind::duplicate_cell;
      return ev;
    }
  }
  // (b) a pair at distance within [2 - 2 delta, 2 + 2 delta]
  const double lo = 2.0 - 2.0 * delta, hi = 2.0 + 2.0 * delta;
  for (std::size_t i = 0; i < B.size(); ++i) {
    for (std::size_t j = i + 1; j < B.size(); ++j) {
      const double d = dist(B[i], B[j]);
      if (d >= lo && d <= hi) {
        ev.occurred = true;
        ev.which = BadEventKind::pair_near_two;
        return ev;
      }
    }
  }
  // (c) a point within [1 - delta, 1 + delta] of the rectangle boundary
  for (const Vec2& p : B) {
    const double d = rect.boundary_distance(p);
    if (d >= 1.0 - delta && d <= 1.0 + delta) {
      ev.occurred = true;
      ev.which = BadEventKind::boundary_band;
      return ev;
    }
  }
  return ev;
}

CouplingReport coupled_crossing_compare(double lambda_c, double p, double a, double b,
                                        double delta, int replicates, RngStream rng,
                                        int threads) {
  if (!(p > 0.0 && p <= 1.0))
    throw std::invalid_argument("coupled_crossing_compare: p must lie in (0,1]");
  if (replicates < 1)
    throw std::invalid_argument("coupled_crossing_compare: replicates must be >= 1");
  const Lattice lat = Lattice::make(a, b, delta);
  const Rect rect = Rect::centered(a, b);
  const Rect region = lat.covered_region();

  struct Row {
    std::uint8_t disagree = 0, bad = 0;
  };
  std::vector<Row> rows(replicates);
  parallel_for(replicates, threads, [&](std::size_t r) {
    RngStream stream = rng.fork(r + 1);
    const PointSet B = sample_poisson(region, lambda_c / p, stream.fork(1));
    RngStream bits = stream.fork(2);

    std::vector<Vec2> eta, eta_hat;
    for (const Vec2& pt : B.points) {
      if (!bits.bernoulli(p)) continue;
      eta.push_back(pt);
      eta_hat.push_back(lat.snap_point(pt));
    }
    // Duplicate snapped sites collapse; the crossing is insensitive to copies.
    const bool cross = occupied_horizontal_crossing(eta, rect);
    const bool cross_hat = occupied_horizontal_crossing(eta_hat, rect);
    rows[r].disagree = cross != cross_hat;
    rows[r].bad = bad_event(B.points, delta, rect).occurred;
  });

  CouplingReport rep;
  rep.replicates = replicates;
  for (const Row& row : rows) {
    rep.disagreements += row.disagree;
    rep.bad_events += row.bad;
    if (row.disagree && !row.bad) ++rep.unexplained_disagreements;
  }
  rep.disagreement_rate = static_cast<double>(rep.disagreements) / replicates;
  rep.bad_event_rate = static_cast<double>(rep.bad_events) / replicates;
  rep.disagreement_implies_bad = rep.unexplained_disagreements == 0;
  return rep;
}

Hypergraph export_crossing_hypergraph(const Lattice& lat, const Rect& rect) {
  if (lat.site_count() > 22)
    throw std::length_error("export_crossing_hypergraph: site count exceeds the 2^n guard");
  const int n = static_cast<int>(lat.site_count());

  std::vector<Vec2> sites(n);
  for (int i = 0; i < n; ++i) sites[i] = lat.site(i);

  // Pairwise lens adjacency and edge attachments are fixed once; every subset
  // reuses them.
  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (dist(sites[i], sites[j]) <= 2.0 + kGeomTol && lens_meets_rect(sites[i], sites[j], rect))
        adj[i].push_back(j);

  const Segment left{{rect.left(), rect.bottom()}, {rect.left(), rect.top()}};
  const Segment right{{rect.right(), rect.bottom()}, {rect.right(), rect.top()}};
  std::vector<std::uint8_t> touch_left(n), touch_right(n);
  for (int i = 0; i < n; ++i) {
    touch_left[i] = dist_point_segment(sites[i], left) <= 1.0 + kGeomTol;
    touch_right[i] = dist_point_segment(sites[i], right) <= 1.0 + kGeomTol;
  }

  std::vector<std::uint64_t> edges;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t mask = 1; mask < total; ++mask) {
    UnionFind uf(n + 2);
    const std::uint32_t SRC = n, SNK = n + 1;
    for (int i = 0; i < n; ++i) {
      if (!(mask & (std::uint64_t{1} << i))) continue;
      if (touch_left[i]) uf.unite(i, SRC);
      if (touch_right[i]) uf.unite(i, SNK);
      for (int j : adj[i])
        if (mask & (std::uint64_t{1} << j)) uf.unite(i, j);
    }
    if (uf.connected(SRC, SNK)) edges.push_back(mask);
  }
  return Hypergraph(n, std::move(edges));
}

}  // namespace perconoise
