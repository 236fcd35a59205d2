#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace sgweno {

// Block-partitioned parallel loop over [0, n). With threads <= 1 the body runs
// inline on the calling thread. Results are deterministic for any thread count
// as long as iterations write to disjoint locations.
template <class Fn>
void parallel_for(std::size_t n, int threads, Fn&& body) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const std::size_t nt = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  std::vector<std::thread> pool;
  pool.reserve(nt);
  const std::size_t chunk = (n + nt - 1) / nt;
  for (std::size_t t = 0; t < nt; ++t) {
    const std::size_t lo = t * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace sgweno
