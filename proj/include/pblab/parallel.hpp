#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace pblab {

/// Worker count: hardware concurrency capped by the PB_THREADS variable.
inline int worker_count() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("PB_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1 && cap < n) n = cap;
  }
  return n;
}

/// Index-parallel map over [begin, end).  Every index writes only its own
/// slots, so results are identical for any schedule or worker count.
template <class Fn>
void parallel_for(int begin, int end, Fn&& fn) {
  const int n = end - begin;
  const int workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (int i = begin; i < end; ++i) fn(i);
    return;
  }
  std::atomic<int> next{begin};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= end) return;
        fn(i);
      }
    });
  for (auto& t : pool) t.join();
}

}  // namespace pblab
