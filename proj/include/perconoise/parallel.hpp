#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace perconoise {

// Runs fn(i) for i in [0, count) across `threads` workers. Work is assigned by
// index, results must be written into per-index slots by the caller, so the
// outcome is identical for every thread count.
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  if (threads <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const std::size_t nthreads = std::min<std::size_t>(threads, count);
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (std::size_t t = 0; t < nthreads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < count; i += nthreads) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

inline int default_threads() {
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace perconoise
