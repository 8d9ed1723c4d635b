#include "perconoise/geometry.hpp"

#include <algorithm>

namespace perconoise {

double dist_point_segment(Vec2 p, const Segment& s) {
  const double vx = s.b.x - s.a.x, vy = s.b.y - s.a.y;
  const double len2 = vx * vx + vy * vy;
  if (len2 == 0.0) return dist(p, s.a);
  double t = ((p.x - s.a.x) * vx + (p.y - s.a.y) * vy) / len2;
  t = std::min(std::max(t, 0.0), 1.0);
  return dist(p, {s.a.x + t * vx, s.a.y + t * vy});
}

std::vector<Rect> Annulus::strips() const {
  const double l = inner, L = outer();
  const double cx = center.x, cy = center.y;
  std::vector<Rect> out;
  out.emplace_back(Vec2{cx, cy + (l + L) / 2}, 2 * L, L - l);  // top, full width
  out.emplace_back(Vec2{cx, cy - (l + L) / 2}, 2 * L, L - l);  // bottom, full width
  out.emplace_back(Vec2{cx - (l + L) / 2, cy}, L - l, 2 * l);  // left, between them
  out.emplace_back(Vec2{cx + (l + L) / 2, cy}, L - l, 2 * l);  // right
  return out;
}

std::vector<Segment> Annulus::ring(double r) const {
  const double cx = center.x, cy = center.y;
  const Vec2 a{cx - r, cy - r}, b{cx + r, cy - r}, c{cx + r, cy + r}, d{cx - r, cy + r};
  return {Segment{a, b}, Segment{b, c}, Segment{c, d}, Segment{d, a}};
}

double Annulus::distance_to_region(Vec2 p) const {
  double best = std::numeric_limits<double>::infinity();
  for (const Rect& r : strips()) best = std::min(best, r.distance_to(p));
  return best;
}

SpatialGrid::SpatialGrid(std::span<const Vec2> pts, double cell_size)
    : cell_(cell_size), count_(pts.size()) {
  if (count_ == 0) return;
  double xmin = pts[0].x, xmax = pts[0].x, ymin = pts[0].y, ymax = pts[0].y;
  for (const Vec2& p : pts) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  ox_ = xmin;
  oy_ = ymin;
  nx_ = static_cast<int>(std::floor((xmax - ox_) / cell_)) + 1;
  ny_ = static_cast<int>(std::floor((ymax - oy_) / cell_)) + 1;

  const std::size_t ncells = static_cast<std::size_t>(nx_) * ny_;
  start_.assign(ncells + 1, 0);
  std::vector<std::size_t> cell_of(count_);
  for (std::size_t k = 0; k < count_; ++k) {
    cell_of[k] = static_cast<std::size_t>(cell_y(pts[k].y)) * nx_ + cell_x(pts[k].x);
    ++start_[cell_of[k] + 1];
  }
  for (std::size_t c = 0; c < ncells; ++c) start_[c + 1] += start_[c];
  items_.resize(count_);
  std::vector<std::size_t> cursor(start_.begin(), start_.end() - 1);
  for (std::size_t k = 0; k < count_; ++k)
    items_[cursor[cell_of[k]]++] = static_cast<std::uint32_t>(k);
}

namespace {

double minimax_radius_on_segment(Vec2 u, Vec2 v, Vec2 a, Vec2 b) {
  // max(|x-u|, |x-v|) along a+t(b-a) is convex in t; ternary search.
  auto value = [&](double t) {
    const Vec2 x{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
    return std::max(dist(x, u), dist(x, v));
  };
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 96 && hi - lo > 1e-12; ++it) {
    const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    if (value(m1) <= value(m2))
      hi = m2;
    else
      lo = m1;
  }
  return value(0.5 * (lo + hi));
}

}  // namespace

bool lens_meets_rect(Vec2 u, Vec2 v, const Rect& rect, double tol) {
  const double half = 0.5 * dist(u, v);
  if (half > 1.0 + tol) return false;  // lens empty

  // Certified lower bound: reject without any search.
  const double lower = std::max({rect.distance_to(u), rect.distance_to(v), half});
  if (lower > 1.0 + tol) return false;

  const Vec2 mid{0.5 * (u.x + v.x), 0.5 * (u.y + v.y)};
  if (rect.contains(mid)) return true;  // unconstrained minimiser is feasible

  // Cheap feasible witness before searching the boundary.
  const Vec2 c = rect.clamp(mid);
  if (std::max(dist(c, u), dist(c, v)) <= 1.0 + tol) return true;

  const Vec2 bl{rect.left(), rect.bottom()}, br{rect.right(), rect.bottom()};
  const Vec2 tr{rect.right(), rect.top()}, tl{rect.left(), rect.top()};
  const Segment edges[4] = {{bl, br}, {br, tr}, {tr, tl}, {tl, bl}};
  for (const Segment& e : edges) {
    if (minimax_radius_on_segment(u, v, e.a, e.b) <= 1.0 + tol) return true;
  }
  return false;
}

namespace {

struct CrossingProblem {
  std::vector<Vec2> pts;   // candidates whose disc can meet the rectangle
  Segment source, sink;    // the two edges to be joined
};

CrossingProblem make_problem(std::span<const Vec2> pts, const Rect& rect, Axis axis,
                             double tol) {
  CrossingProblem pr;
  pr.pts.reserve(pts.size());
  for (const Vec2& p : pts)
    if (rect.distance_to(p) <= 1.0 + tol) pr.pts.push_back(p);
  const Vec2 bl{rect.left(), rect.bottom()}, br{rect.right(), rect.bottom()};
  const Vec2 tr{rect.right(), rect.top()}, tl{rect.left(), rect.top()};
  if (axis == Axis::horizontal) {
    pr.source = {bl, tl};  // left edge
    pr.sink = {br, tr};    // right edge
  } else {
    pr.source = {bl, br};  // bottom edge
    pr.sink = {tl, tr};    // top edge
  }
  return pr;
}

}  // namespace

bool occupied_crossing(std::span<const Vec2> pts, const Rect& rect, Axis axis, double tol) {
  const CrossingProblem pr = make_problem(pts, rect, axis, tol);
  const std::size_t n = pr.pts.size();
  if (n == 0) return false;

  UnionFind uf(n + 2);
  const std::uint32_t SRC = static_cast<std::uint32_t>(n);
  const std::uint32_t SNK = static_cast<std::uint32_t>(n) + 1;

  for (std::size_t i = 0; i < n; ++i) {
    // A disc touching an edge segment touches it inside the closed rectangle.
    if (dist_point_segment(pr.pts[i], pr.source) <= 1.0 + tol)
      uf.unite(static_cast<std::uint32_t>(i), SRC);
    if (dist_point_segment(pr.pts[i], pr.sink) <= 1.0 + tol)
      uf.unite(static_cast<std::uint32_t>(i), SNK);
  }
  if (!uf.connected(SRC, SNK)) {
    SpatialGrid grid(pr.pts, 2.0 + 2 * tol);
    for (std::size_t i = 0; i < n; ++i) {
      grid.for_candidates(pr.pts[i], [&](std::uint32_t j) {
        if (j <= i) return;
        if (uf.connected(static_cast<std::uint32_t>(i), j)) return;
        if (dist_sq(pr.pts[i], pr.pts[j]) > (2.0 + tol) * (2.0 + tol)) return;
        if (lens_meets_rect(pr.pts[i], pr.pts[j], rect, tol))
          uf.unite(static_cast<std::uint32_t>(i), j);
      });
    }
  }
  return uf.connected(SRC, SNK);
}

bool annulus_vacant_circuit(std::span<const Vec2> pts, const Annulus& ann, double tol) {
  if (ann.inner < 2.0)
    throw std::invalid_argument("annulus_vacant_circuit: inner half-width must be >= 2");
  const std::vector<Rect> strips = ann.strips();
  const std::vector<Segment> inner_ring = ann.ring(ann.inner);
  const std::vector<Segment> outer_ring = ann.ring(ann.outer());

  std::vector<Vec2> cand;
  cand.reserve(pts.size());
  for (const Vec2& p : pts)
    if (ann.distance_to_region(p) <= 1.0 + tol) cand.push_back(p);
  const std::size_t n = cand.size();
  if (n == 0) return true;

  UnionFind uf(n + 2);
  const std::uint32_t INNER = static_cast<std::uint32_t>(n);
  const std::uint32_t OUTER = static_cast<std::uint32_t>(n) + 1;

  auto touches = [&](Vec2 p, const std::vector<Segment>& ring) {
    for (const Segment& s : ring)
      if (dist_point_segment(p, s) <= 1.0 + tol) return true;
    return false;
  };
  for (std::size_t i = 0; i < n; ++i) {
    if (touches(cand[i], inner_ring)) uf.unite(static_cast<std::uint32_t>(i), INNER);
    if (touches(cand[i], outer_ring)) uf.unite(static_cast<std::uint32_t>(i), OUTER);
  }

  SpatialGrid grid(cand, 2.0 + 2 * tol);
  for (std::size_t i = 0; i < n; ++i) {
    grid.for_candidates(cand[i], [&](std::uint32_t j) {
      if (j <= i) return;
      if (uf.connected(static_cast<std::uint32_t>(i), j)) return;
      if (dist_sq(cand[i], cand[j]) > (2.0 + tol) * (2.0 + tol)) return;
      for (const Rect& strip : strips) {
        if (lens_meets_rect(cand[i], cand[j], strip, tol)) {
          uf.unite(static_cast<std::uint32_t>(i), j);
          break;
        }
      }
    });
  }
  return !uf.connected(INNER, OUTER);
}

}  // namespace perconoise
