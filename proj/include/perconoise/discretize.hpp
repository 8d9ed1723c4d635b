#pragma once

#include <cstdint>
#include <vector>

#include "perconoise/geometry.hpp"
#include "perconoise/hypergraph.hpp"
#include "perconoise/sampling.hpp"

namespace perconoise {

// Sites of delta Z^2 covering the padded rectangle R_{(a+2) x (b+2)}, indexed
// row-major. Each site owns the half-open delta x delta cell centred on it,
// so the snapping map is total and deterministic. The site range is the
// smallest one whose cells cover the padded rectangle; when delta divides
// (a+2)/2 and (b+2)/2 exactly this is precisely the lattice points inside it.
struct Lattice {
  double a = 0.0, b = 0.0, delta = 0.0;
  long long kx = 0, ky = 0;  // sites (i*delta, j*delta) with |i| <= kx, |j| <= ky

  static Lattice make(double a, double b, double delta);

  long long nx() const { return 2 * kx + 1; }
  long long ny() const { return 2 * ky + 1; }
  long long site_count() const { return nx() * ny(); }

  Vec2 site(long long index) const;
  long long site_index(long long i, long long j) const { return (j + ky) * nx() + (i + kx); }

  // Cell coordinates of the cell containing p (independent of the site range).
  std::pair<long long, long long> cell_of(Vec2 p) const;
  // Site index of the cell containing p; requires p inside the covered region.
  long long snap_index(Vec2 p) const;
  // The centre of the cell containing p; never materialises site indices, so
  // it works for arbitrarily fine meshes.
  Vec2 snap_point(Vec2 p) const;

  // The union of all cells; B is sampled here so that snapped occupation is an
  // exact q-subset of the sites.
  Rect covered_region() const;
};

// q = 1 - exp(-lambda_c delta^2 / p): the per-site occupation probability of
// the snapped parent configuration.
double q_of(double delta, double p, double lambda_c);

// Snap each point to its cell's site and collapse duplicates; returns sorted
// site indices.
std::vector<long long> snap(const PointSet& B, const Lattice& lat);

// The degenerate configurations under which snapping can change the induced
// graph: (a) two points in one cell, (b) a pair within 2 +- 2 delta,
// (c) a point within 1 +- delta of the rectangle boundary. Reports the first
// clause that fires.
enum class BadEventKind { none, duplicate_cell, pair_near_two, boundary_band };
struct BadEvent {
  bool occurred = false;
  BadEventKind which = BadEventKind::none;
};
BadEvent bad_event(std::span<const Vec2> B, double delta, const Rect& rect);

// Couples (B, snapped B) replicate by replicate with shared inclusion bits and
// compares the crossing indicators. A disagreement without a bad event is
// counted separately; the coupling argument says there should be none.
struct CouplingReport {
  int replicates = 0;
  int disagreements = 0;
  int bad_events = 0;
  int unexplained_disagreements = 0;
  double disagreement_rate = 0.0;
  double bad_event_rate = 0.0;
  bool disagreement_implies_bad = true;
};
CouplingReport coupled_crossing_compare(double lambda_c, double p, double a, double b,
                                        double delta, int replicates, RngStream rng,
                                        int threads = 1);

// Materialises the crossing event of `rect` over subsets of the lattice sites
// as a hypergraph: a subset is an edge iff its discs cross the rectangle
// horizontally. Site count <= 22.
Hypergraph export_crossing_hypergraph(const Lattice& lat, const Rect& rect);

}  // namespace perconoise
