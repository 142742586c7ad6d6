#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace hbqed {

// Static contiguous split of [0, n) over `workers` threads. Each index is
// processed exactly once by exactly one worker, so any per-index computation
// that writes only to per-index storage is bit-identical for every worker
// count.
inline void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
  if (n <= 0) return;
  if (workers > n) workers = n;
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    const int lo = int(std::int64_t(n) * w / workers);
    const int hi = int(std::int64_t(n) * (w + 1) / workers);
    pool.emplace_back([=, &fn] {
      for (int i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

inline int default_workers() {
  if (const char* env = std::getenv("HBQED_WORKERS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return 1;
}

}  // namespace hbqed
