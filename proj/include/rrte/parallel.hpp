#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace rrte::parallel {

// process-wide worker count for the coarse-grained loops (blocks, q-nodes)
void set_threads(int n);
int threads();

// run fn(i) for i in [0, n); results must be written to per-i slots so the
// outcome is independent of scheduling
inline void parallel_for(int n, const std::function<void(int)>& fn) {
  const int nt = std::min(threads(), n);
  if (nt <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (int t = 0; t < nt; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= n) return;
        fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace rrte::parallel
