#pragma once

#include <algorithm>
#include <bit>
#include <vector>

#include "perconoise/fourier.hpp"
#include "perconoise/hypergraph.hpp"
#include "perconoise/rng.hpp"

namespace perconoise {

inline BooleanFn make_random_fn(int n, double p, RngStream& rng, bool boolean_valued = false) {
  std::vector<double> table(std::size_t{1} << n);
  for (double& v : table) v = boolean_valued ? (rng.bernoulli(0.5) ? 1.0 : 0.0) : rng.next_unit();
  return BooleanFn(n, p, std::move(table));
}

// Monotone [0,1]-valued: running maxima of random values over the subset
// order (f(x) = max over y <= x of r(y)).
inline BooleanFn make_random_monotone_fn(int n, double p, RngStream& rng) {
  std::vector<double> table(std::size_t{1} << n);
  for (double& v : table) v = rng.next_unit();
  for (int i = 0; i < n; ++i) {
    const std::size_t bit = std::size_t{1} << i;
    for (std::size_t x = 0; x < table.size(); ++x)
      if (x & bit) table[x] = std::max(table[x], table[x ^ bit]);
  }
  return BooleanFn(n, p, std::move(table));
}

// Monotone {0,1}-valued: a random weighted threshold function.
inline BooleanFn make_random_monotone_indicator(int n, double p, RngStream& rng) {
  std::vector<double> w(n);
  double total = 0.0;
  for (double& v : w) {
    v = rng.next_unit();
    total += v;
  }
  const double theta = rng.uniform(0.0, total);
  std::vector<double> table(std::size_t{1} << n);
  for (std::size_t x = 0; x < table.size(); ++x) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      if (x & (std::size_t{1} << i)) s += w[i];
    table[x] = s > theta ? 1.0 : 0.0;
  }
  return BooleanFn(n, p, std::move(table));
}

// Each subset independently an edge with probability beta.
inline Hypergraph make_random_hypergraph(int n, double beta, RngStream& rng) {
  std::vector<std::uint64_t> edges;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < total; ++mask)
    if (rng.bernoulli(beta)) edges.push_back(mask);
  return Hypergraph(n, std::move(edges));
}

// m-uniform: each m-subset an edge with probability beta.
inline Hypergraph make_random_m_uniform(int n, int m, double beta, RngStream& rng) {
  std::vector<std::uint64_t> edges;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < total; ++mask)
    if (std::popcount(mask) == m && rng.bernoulli(beta)) edges.push_back(mask);
  return Hypergraph(n, std::move(edges));
}

}  // namespace perconoise
