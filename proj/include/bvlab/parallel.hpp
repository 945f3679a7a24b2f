#pragma once

#include <cstdlib>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace bvlab {

/// Thread budget for internal parallel loops: BVLAB_THREADS when set,
/// otherwise a small multiple of the hardware, never below 1.
inline int thread_budget() {
  if (const char* env = std::getenv("BVLAB_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw > 8 ? 8 : hw);
}

/// Runs fn(0..n-1) across at most thread_budget() threads. Tasks must be
/// independent; results are whatever fn writes at its own index. The first
/// exception thrown by any task is rethrown on the caller.
inline void parallel_for(int n, const std::function<void(int)>& fn) {
  int threads = std::min(n, thread_budget());
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t]() {
      try {
        for (int i = t; i < n; i += threads) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (std::thread& th : pool) th.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace bvlab
