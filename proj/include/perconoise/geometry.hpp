#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace perconoise {

// All lengths are in units of the disc radius: discs have radius 1 and two
// discs overlap iff their centres are within distance 2.
inline constexpr double kGeomTol = 1e-9;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline double dist(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }
inline double dist_sq(Vec2 a, Vec2 b) {
  const double dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}

// Axis-aligned rectangle given by centre and side lengths.
struct Rect {
  Vec2 center{0.0, 0.0};
  double width = 0.0;
  double height = 0.0;

  Rect() = default;
  Rect(Vec2 c, double w, double h) : center(c), width(w), height(h) {
    if (!(w > 0.0) || !(h > 0.0) || !std::isfinite(w) || !std::isfinite(h))
      throw std::invalid_argument("Rect: side lengths must be positive and finite");
  }

  // R_{a x b}: the a-by-b rectangle centred at the origin.
  static Rect centered(double a, double b) { return Rect({0.0, 0.0}, a, b); }

  double left() const { return center.x - width / 2; }
  double right() const { return center.x + width / 2; }
  double bottom() const { return center.y - height / 2; }
  double top() const { return center.y + height / 2; }

  Rect padded(double r) const { return Rect(center, width + 2 * r, height + 2 * r); }

  bool contains(Vec2 p, double tol = 0.0) const {
    return p.x >= left() - tol && p.x <= right() + tol && p.y >= bottom() - tol &&
           p.y <= top() + tol;
  }

  // Euclidean distance from p to the (closed) rectangle; 0 inside.
  double distance_to(Vec2 p) const {
    const double dx = std::max({left() - p.x, 0.0, p.x - right()});
    const double dy = std::max({bottom() - p.y, 0.0, p.y - top()});
    return std::hypot(dx, dy);
  }

  // Distance from p to the rectangle's boundary (positive inside and outside).
  double boundary_distance(Vec2 p) const {
    if (contains(p)) {
      return std::min({p.x - left(), right() - p.x, p.y - bottom(), top() - p.y});
    }
    return distance_to(p);
  }

  // Nearest point of the closed rectangle.
  Vec2 clamp(Vec2 p) const {
    return {std::min(std::max(p.x, left()), right()),
            std::min(std::max(p.y, bottom()), top())};
  }
};

struct Segment {
  Vec2 a, b;
};

double dist_point_segment(Vec2 p, const Segment& s);

// Square annulus: points whose l-infinity distance from the centre lies
// between `inner` and 2*inner.
struct Annulus {
  Vec2 center{0.0, 0.0};
  double inner = 0.0;

  Annulus() = default;
  Annulus(Vec2 c, double ell) : center(c), inner(ell) {
    if (!(ell > 0.0)) throw std::invalid_argument("Annulus: inner half-width must be positive");
  }

  double outer() const { return 2.0 * inner; }

  // Four overlapping closed rectangles whose union is exactly the annulus:
  // full-width top/bottom strips plus left/right strips between them.
  std::vector<Rect> strips() const;
  // The four segments of the square ring at l-infinity radius r.
  std::vector<Segment> ring(double r) const;

  double distance_to_region(Vec2 p) const;
};

// Uniform hash over cells of a fixed size; lookups return a superset of all
// points within `cell_size` (Euclidean) of the query point.
class SpatialGrid {
 public:
  SpatialGrid(std::span<const Vec2> pts, double cell_size);

  template <typename Visitor>
  void for_candidates(Vec2 p, Visitor&& visit) const {
    if (count_ == 0) return;
    const int ci = cell_x(p.x), cj = cell_y(p.y);
    for (int j = cj - 1; j <= cj + 1; ++j) {
      if (j < 0 || j >= ny_) continue;
      for (int i = ci - 1; i <= ci + 1; ++i) {
        if (i < 0 || i >= nx_) continue;
        const std::size_t cell = static_cast<std::size_t>(j) * nx_ + i;
        for (std::size_t k = start_[cell]; k < start_[cell + 1]; ++k) visit(items_[k]);
      }
    }
  }

  std::size_t size() const { return count_; }

 private:
  int cell_x(double x) const {
    int c = static_cast<int>(std::floor((x - ox_) / cell_));
    return std::min(std::max(c, 0), nx_ - 1);
  }
  int cell_y(double y) const {
    int c = static_cast<int>(std::floor((y - oy_) / cell_));
    return std::min(std::max(c, 0), ny_ - 1);
  }

  double ox_ = 0.0, oy_ = 0.0, cell_ = 1.0;
  int nx_ = 0, ny_ = 0;
  std::size_t count_ = 0;
  std::vector<std::size_t> start_;
  std::vector<std::uint32_t> items_;
};

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    for (std::size_t i = 0; i < n; ++i) parent_[i] = static_cast<std::uint32_t>(i);
  }
  std::uint32_t find(std::uint32_t a) {
    while (parent_[a] != a) {
      parent_[a] = parent_[parent_[a]];
      a = parent_[a];
    }
    return a;
  }
  void unite(std::uint32_t a, std::uint32_t b) { parent_[find(a)] = find(b); }
  bool connected(std::uint32_t a, std::uint32_t b) { return find(a) == find(b); }

 private:
  std::vector<std::uint32_t> parent_;
};

// True iff some point of the rectangle lies within distance 1+tol of both u
// and v, i.e. the lens D(u) cap D(v) meets the rectangle. The minimax
// min_{x in rect} max(|x-u|, |x-v|) is convex; if the unconstrained minimiser
// (the midpoint) falls outside, the constrained optimum lies on an edge and is
// located by ternary search.
bool lens_meets_rect(Vec2 u, Vec2 v, const Rect& rect, double tol = kGeomTol);

enum class Axis { horizontal, vertical };
enum class CrossDirection { horizontal, vertical };

// Occupied crossing of `rect` between the two edges perpendicular to `axis`,
// using only the part of the disc union inside the rectangle.
bool occupied_crossing(std::span<const Vec2> pts, const Rect& rect, Axis axis,
                       double tol = kGeomTol);

inline bool occupied_horizontal_crossing(std::span<const Vec2> pts, const Rect& rect,
                                         double tol = kGeomTol) {
  return occupied_crossing(pts, rect, Axis::horizontal, tol);
}

// Vacant crossings are always evaluated through duality with the occupied
// crossing in the perpendicular direction.
inline bool vacant_crossing(std::span<const Vec2> pts, const Rect& rect,
                            CrossDirection direction, double tol = kGeomTol) {
  if (direction == CrossDirection::vertical)
    return !occupied_crossing(pts, rect, Axis::horizontal, tol);
  return !occupied_crossing(pts, rect, Axis::vertical, tol);
}

// True iff no chain of discs joins the inner face of the annulus to its outer
// face inside the annulus, i.e. a vacant circuit separates them. Requires
// inner half-width >= 2 so a single disc cannot straddle the hole.
bool annulus_vacant_circuit(std::span<const Vec2> pts, const Annulus& ann,
                            double tol = kGeomTol);

}  // namespace perconoise
