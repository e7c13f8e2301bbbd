#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace bellwalk {

// Worker count: hardware concurrency, optionally capped by the
// BELLWALK_THREADS environment variable. Always >= 1.
inline int worker_count() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("BELLWALK_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1 && cap < n) n = cap;
  }
  return n;
}

// Runs fn(i) for i in [0, n), fanned out over contiguous index blocks.
// Each i writes only its own slot in the caller's output, so results are
// bit-identical regardless of the worker count; any reduction must happen
// afterwards in index order.
template <class Fn>
void parallel_fill(int n, Fn&& fn) {
  const int workers = std::min(worker_count(), n > 0 ? n : 1);
  if (workers <= 1 || n < 2) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const int chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const int lo = w * chunk;
    const int hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn]() {
      for (int i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace bellwalk
