#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cmath>
#include <sstream>

#include "perconoise/sampling.hpp"
#include "perconoise/stats.hpp"

using namespace perconoise;

TEST_CASE("zero intensity gives the empty configuration") {
  const PointSet ps = sample_poisson(Rect::centered(10, 10), 0.0, RngStream(1, 0));
  CHECK(ps.empty());
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS_AS(sample_poisson(Rect::centered(10, 10), -1.0, RngStream(1, 0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(sample_poisson(Rect::centered(10, 10),
                                 std::numeric_limits<double>::quiet_NaN(), RngStream(1, 0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(Rect::centered(0.0, 5.0), std::invalid_argument);
  const PointSet ps = sample_poisson(Rect::centered(4, 4), 1.0, RngStream(1, 0));
  CHECK_THROWS_AS(p_subset(ps, -0.1, RngStream(1, 1)), std::invalid_argument);
  CHECK_THROWS_AS(p_subset(ps, 1.1, RngStream(1, 1)), std::invalid_argument);
  CHECK_THROWS_AS(two_stage_sample(1.0, 0.0, Rect::centered(4, 4), RngStream(1, 2)),
                  std::invalid_argument);
}

TEST_CASE("poisson sample: count band and containment") {
  // 10x10 region at intensity 1: mean count over 10^4 seeded replicates sits
  // in 100 +- 3 sigma of the replicate average (Poisson variance 100).
  const Rect region = Rect::centered(10, 10);
  const int reps = 10000;
  double total = 0.0;
  for (int i = 0; i < reps; ++i) {
    const PointSet ps = sample_poisson(region, 1.0, RngStream(777, i));
    total += static_cast<double>(ps.size());
    if (i < 50)
      for (const Vec2& p : ps.points) CHECK(region.contains(p));
  }
  const double mean_count = total / reps;
  CHECK(std::abs(mean_count - 100.0) < 3.0 * std::sqrt(100.0 / reps));
}

TEST_CASE("same (region, intensity, seed) twice gives identical sets") {
  const Rect region = Rect::centered(7, 3);
  const PointSet a = sample_poisson(region, 0.8, RngStream(5, 11));
  const PointSet b = sample_poisson(region, 0.8, RngStream(5, 11));
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.points[i].x == b.points[i].x);
    CHECK(a.points[i].y == b.points[i].y);
  }
}

TEST_CASE("p_subset at the extremes") {
  const PointSet parent = sample_poisson(Rect::centered(10, 10), 1.0, RngStream(3, 0));
  const PointSet all = p_subset(parent, 1.0, RngStream(3, 1));
  const PointSet none = p_subset(parent, 0.0, RngStream(3, 2));
  CHECK(all.size() == parent.size());
  CHECK(none.empty());
}

TEST_CASE("p_subset count band") {
  // Parent of 10^4 points, p = 0.3: retained count within 3 sigma of the
  // binomial law on a fixed seed schedule.
  PointSet parent;
  parent.points.assign(10000, Vec2{0.0, 0.0});
  const int reps = 200;
  double total = 0.0;
  for (int i = 0; i < reps; ++i) total += static_cast<double>(p_subset(parent, 0.3, RngStream(11, i)).size());
  const double avg = total / reps;
  CHECK(std::abs(avg - 3000.0) < 3.0 * std::sqrt(2100.0 / reps));
}

TEST_CASE("two-stage sample: p = 1 collapses, counts follow Poisson(lambda_c)") {
  const Rect region = Rect::centered(20, 20);
  const TwoStageSample degenerate = two_stage_sample(0.7, 1.0, region, RngStream(9, 0));
  CHECK(degenerate.parent.size() == degenerate.thinned.size());

  // lambda_c / p = 2 with p = 1/4, so eta is marginally Poisson(0.5 * 400).
  const int reps = 10000;
  double total = 0.0;
  for (int i = 0; i < reps; ++i)
    total += static_cast<double>(two_stage_sample(0.5, 0.25, region, RngStream(10, i)).thinned.size());
  const double avg = total / reps;
  CHECK(std::abs(avg - 200.0) < 3.0 * std::sqrt(200.0 / reps));
}

TEST_CASE("two-stage count distribution matches the direct Poisson law") {
  // Kolmogorov-Smirnov on counts at alpha = 0.01, plus a chi-square check of
  // the count histogram against Poisson(lambda_c * area).
  const Rect region = Rect::centered(8, 8);
  const double lambda_c = 0.5;
  const int reps = 10000;
  std::vector<double> two_stage_counts(reps), direct_counts(reps);
  for (int i = 0; i < reps; ++i) {
    two_stage_counts[i] =
        static_cast<double>(two_stage_sample(lambda_c, 0.1, region, RngStream(21, i)).thinned.size());
    direct_counts[i] =
        static_cast<double>(sample_poisson(region, lambda_c, RngStream(22, i)).size());
  }
  const double d = ks_distance(two_stage_counts, direct_counts);
  CHECK(d < ks_critical(reps, reps, 0.01));

  // Chi-square against the exact Poisson pmf, pooling the tail.
  const double mean = lambda_c * 64.0;
  std::vector<int> bins(61, 0);
  for (double c : two_stage_counts) bins[std::min<int>(static_cast<int>(c), 60)]++;
  double chi2 = 0.0;
  int dof = 0;
  double pmf = std::exp(-mean);
  double cum = 0.0;
  for (int k = 0; k <= 60; ++k) {
    const double prob = k == 60 ? 1.0 - cum : pmf;
    cum += pmf;
    pmf *= mean / (k + 1);
    const double expect = prob * reps;
    if (expect < 5.0) continue;
    chi2 += (bins[k] - expect) * (bins[k] - expect) / expect;
    ++dof;
  }
  CHECK(chi_square_tail(chi2, dof - 1) > 1e-4);
}

TEST_CASE("thinning composes: q-subset then p-subset equals pq-subset") {
  // Exact identity over every intermediate subset, |S| = 12.
  const int n = 12;
  const double p = 0.45, q = 0.7;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t T : {std::uint64_t{0}, std::uint64_t{0b1}, std::uint64_t{0b100110},
                          total - 1}) {
    long double prob = 0.0L;
    for (std::uint64_t M = 0; M < total; ++M) {
      if (T & ~M) continue;
      const int msz = std::popcount(M), tsz = std::popcount(T);
      prob += std::pow((long double)q, msz) * std::pow((long double)(1 - q), n - msz) *
              std::pow((long double)p, tsz) * std::pow((long double)(1 - p), msz - tsz);
    }
    const int tsz = std::popcount(T);
    const long double direct = std::pow((long double)(p * q), tsz) *
                               std::pow((long double)(1 - p * q), n - tsz);
    CHECK(std::abs(static_cast<double>(prob - direct)) < 1e-12);
  }

  // Per-element inclusion and pairwise joint frequencies through the actual
  // sampler agree with the single-step law (4-sigma bands).
  const int reps = 40000;
  int single = 0, pair = 0;
  for (int r = 0; r < reps; ++r) {
    RngStream rng(31, r);
    const auto mid = p_subset_bits(n, q, rng.fork(1));
    RngStream inner = rng.fork(2);
    std::vector<std::uint8_t> out(n);
    for (int i = 0; i < n; ++i) out[i] = mid[i] && inner.bernoulli(p);
    single += out[0];
    pair += out[0] && out[1];
  }
  const double pq = p * q;
  CHECK(std::abs(single / double(reps) - pq) < 4.0 * std::sqrt(pq * (1 - pq) / reps));
  CHECK(std::abs(pair / double(reps) - pq * pq) <
        4.0 * std::sqrt(pq * pq * (1 - pq * pq) / reps));
}

TEST_CASE("points survive a CSV round trip with provenance") {
  const PointSet ps = sample_poisson(Rect::centered(5, 5), 0.9, RngStream(55, 4));
  std::stringstream ss;
  write_points_csv(ps, ss);
  const PointSet back = read_points_csv(ss);
  REQUIRE(back.size() == ps.size());
  CHECK(back.prov.key == ps.prov.key);
  CHECK(back.prov.intensity == doctest::Approx(ps.prov.intensity));
  for (std::size_t i = 0; i < ps.size(); ++i) {
    CHECK(back.points[i].x == ps.points[i].x);
    CHECK(back.points[i].y == ps.points[i].y);
  }
}
