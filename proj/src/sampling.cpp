#include "perconoise/sampling.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace perconoise {

PointSet sample_poisson(const Rect& region, double intensity, RngStream rng) {
  if (!(intensity >= 0.0) || !std::isfinite(intensity))
    throw std::invalid_argument("sample_poisson: intensity must be finite and non-negative");
  const double area = region.width * region.height;
  if (!(area > 0.0) || !std::isfinite(area))
    throw std::invalid_argument("sample_poisson: degenerate region");

  PointSet out;
  out.prov.key = rng.key();
  out.prov.intensity = intensity;
  const std::uint64_t n = rng.poisson(intensity * area);
  out.points.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const double x = rng.uniform(region.left(), region.right());
    const double y = rng.uniform(region.bottom(), region.top());
    out.points.push_back({x, y});
  }
  return out;
}

PointSet p_subset(const PointSet& parent, double p, RngStream rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p_subset: p must lie in [0,1]");
  PointSet out;
  out.prov.key = rng.key();
  out.prov.p = p;
  out.prov.intensity = parent.prov.intensity * p;
  for (const Vec2& pt : parent.points)
    if (rng.bernoulli(p)) out.points.push_back(pt);
  return out;
}

std::vector<std::uint8_t> p_subset_bits(std::size_t n, double p, RngStream rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p_subset: p must lie in [0,1]");
  std::vector<std::uint8_t> bits(n);
  for (std::size_t i = 0; i < n; ++i) bits[i] = rng.bernoulli(p) ? 1 : 0;
  return bits;
}

TwoStageSample two_stage_sample(double lambda_c, double p, const Rect& region, RngStream rng) {
  if (!(lambda_c > 0.0)) throw std::invalid_argument("two_stage_sample: lambda_c must be positive");
  if (!(p > 0.0 && p <= 1.0))
    throw std::invalid_argument("two_stage_sample: p must lie in (0,1]");
  TwoStageSample out;
  out.parent = sample_poisson(region, lambda_c / p, rng.fork(1));
  out.thinned = p == 1.0 ? out.parent : p_subset(out.parent, p, rng.fork(2));
  out.thinned.prov.parent = "two_stage_parent";
  return out;
}

void write_points_csv(const PointSet& ps, std::ostream& out) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "# seed %llu intensity %.17g\n",
                static_cast<unsigned long long>(ps.prov.key), ps.prov.intensity);
  out << buf << "x,y\n";
  for (const Vec2& p : ps.points) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", p.x, p.y);
    out << buf;
  }
}

PointSet read_points_csv(std::istream& in) {
  PointSet ps;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream hdr(line.substr(1));
      std::string word;
      while (hdr >> word) {
        if (word == "seed") hdr >> ps.prov.key;
        if (word == "intensity") hdr >> ps.prov.intensity;
      }
      continue;
    }
    if (line == "x,y") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::runtime_error("points csv: malformed row");
    ps.points.push_back({std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
  }
  return ps;
}

}  // namespace perconoise
