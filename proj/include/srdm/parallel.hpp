#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace srdm {

// Process-wide worker cap, set once by the CLI's --threads flag.
inline int& thread_limit() {
  static int limit = 0;  // 0 = hardware concurrency
  return limit;
}

inline int effective_threads() {
  int limit = thread_limit();
  if (limit > 0) return limit;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Static-partition parallel loop. Each index is touched by exactly one worker,
// so per-index writes give results independent of the thread count.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const int nthreads = std::min<std::size_t>(effective_threads(), n);
  if (nthreads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(nthreads);
  const std::size_t chunk = (n + nthreads - 1) / nthreads;
  for (int t = 0; t < nthreads; ++t) {
    const std::size_t lo = t * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    workers.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& w : workers) w.join();
}

}  // namespace srdm
