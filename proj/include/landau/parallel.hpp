#pragma once

#include "landau/core.hpp"

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace landau {

// Static-chunked loop over [0, n). Results must be written by index so the
// outcome is independent of scheduling; the first exception by chunk order
// is rethrown.
template <typename F>
void parallel_for(Index n, F&& body, int workers = worker_count()) {
  if (n <= 0) return;
  const Index w = std::max<Index>(1, std::min<Index>(workers, n));
  if (w == 1) {
    for (Index i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<size_t>(w));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(w));
  for (Index t = 0; t < w; ++t) {
    pool.emplace_back([&, t] {
      const Index lo = n * t / w, hi = n * (t + 1) / w;
      try {
        for (Index i = lo; i < hi; ++i) body(i);
      } catch (...) {
        errors[static_cast<size_t>(t)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace landau
