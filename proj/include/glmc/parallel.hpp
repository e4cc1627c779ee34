#pragma once

#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace glmc {

// Runs fn(i) for i in [0, n) across `threads` workers.  Each index owns its
// output slot and its own keyed RNG stream, so results do not depend on the
// thread count; reductions happen after the join, in index order.
template <typename Fn>
void parallel_for(long n, int threads, Fn&& fn) {
  if (threads < 1) threads = 1;
  if (threads == 1 || n <= 1) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<long> next(0);
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (;;) {
      const long i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int n_workers = static_cast<int>(std::min<long>(threads, n));
  pool.reserve(n_workers);
  for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace glmc
