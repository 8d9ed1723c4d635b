#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace perconoise {

// Counter-based stream: the k-th output is a pure function of (key, k), so a
// stream can be replayed or split without touching any other stream, and the
// same (seed, stream) pair produces the same bytes on every platform and for
// every thread count.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
      : key_(derive_key(master_seed, stream_index)), counter_(0) {}

  std::uint64_t next_u64() {
    ++counter_;
    std::uint64_t z = key_ + counter_ * kGamma;
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

  // Uniform in [0, 1), 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  bool bernoulli(double p) { return next_unit() < p; }

  // Exact Poisson draw: split the mean into chunks small enough for the
  // product method (superposition keeps the law exact).
  std::uint64_t poisson(double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean))
      throw std::invalid_argument("poisson: mean must be finite and non-negative");
    std::uint64_t total = 0;
    while (mean > 16.0) {
      total += poisson_product(16.0);
      mean -= 16.0;
    }
    total += poisson_product(mean);
    return total;
  }

  // Independent substream addressed by tag; replayable in isolation.
  RngStream fork(std::uint64_t tag) const {
    RngStream s(0, 0);
    s.key_ = scramble(key_ ^ scramble(tag ^ 0x8F1BBCDCBFA53E0BULL));
    s.counter_ = 0;
    return s;
  }

  std::uint64_t key() const { return key_; }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  static std::uint64_t scramble(std::uint64_t z) {
    z ^= z >> 33;
    z *= 0xFF51AFD7ED558CCDULL;
    z ^= z >> 33;
    z *= 0xC4CEB9FE1A85EC53ULL;
    z ^= z >> 33;
    return z;
  }

  static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream) {
    return scramble(seed ^ scramble(stream ^ 0xD6E8FEB86659FD93ULL));
  }

  std::uint64_t poisson_product(double mu) {
    if (mu <= 0.0) return 0;
    const double limit = std::exp(-mu);
    std::uint64_t k = 0;
    double prod = 1.0;
    do {
      ++k;
      prod *= next_unit();
    } while (prod > limit);
    return k - 1;
  }

  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace perconoise
