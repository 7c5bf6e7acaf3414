#pragma once
//============================================================================
// Minimal worker pool for embarrassingly parallel sample sweeps.
//
// Worker count comes from the SD_WORKERS environment variable (default 1).
// Callers must write results into per-index slots; reductions happen
// sequentially afterwards, so outputs are identical for any worker count.
//============================================================================

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace sdm {

inline int worker_count() {
  if (const char* env = std::getenv("SD_WORKERS")) {
    int n = std::atoi(env);
    if (n >= 1) return n > 64 ? 64 : n;
  }
  return 1;
}

template <class F>
void parallel_for(std::size_t n, F&& body) {
  int workers = worker_count();
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= n) break;
        body(i);
      }
    });
  for (auto& t : pool) t.join();
}

}  // namespace sdm
