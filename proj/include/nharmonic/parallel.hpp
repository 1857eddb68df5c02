#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace nharm {

// Threads to use: explicit request, else NHARM_THREADS, else 1.
inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("NHARM_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

// Contiguous range split. Work must give identical results for any split.
inline void parallel_for(int n, int threads, const std::function<void(int, int)>& body) {
  threads = std::min(std::max(threads, 1), n > 0 ? n : 1);
  if (threads <= 1 || n <= 0) {
    body(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(std::size_t(threads));
  const int chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const int lo = t * chunk;
    const int hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(body, lo, hi);
  }
  for (auto& th : pool) th.join();
}

}  // namespace nharm
