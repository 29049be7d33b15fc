#pragma once

#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace paramid {

// Runs fn(k) for k in [0, n) on `workers` threads with a static block
// partition. Results must be written to disjoint slots so that the outcome
// is identical for any worker count. The first exception wins and is
// rethrown on the calling thread.
inline void parallel_for(int n, int workers,
                         const std::function<void(int)>& fn) {
  if (n <= 0) return;
  if (workers < 1) workers = 1;
  if (workers == 1 || n == 1) {
    for (int k = 0; k < n; ++k) fn(k);
    return;
  }
  if (workers > n) workers = n;

  std::mutex err_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    const int begin = static_cast<int>(static_cast<long long>(n) * w / workers);
    const int end = static_cast<int>(static_cast<long long>(n) * (w + 1) / workers);
    pool.emplace_back([&, begin, end]() {
      try {
        for (int k = begin; k < end; ++k) {
          {
            std::lock_guard<std::mutex> lock(err_mutex);
            if (first_error) return;
          }
          fn(k);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace paramid
