#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace scusum {

// Worker cap for replication loops: set_max_threads() if called with n > 0,
// else SEASONAL_CUSUM_THREADS, else the hardware concurrency.
int max_threads();
void set_max_threads(int n);

/// Calls body(i) for every i in [0, n), spread over up to max_threads()
/// workers in contiguous blocks. The body must only write to slot i of
/// caller-owned storage; reductions happen afterwards in index order, so
/// results do not depend on the thread count. The first exception thrown
/// by any worker is rethrown.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(max_threads()), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      body(i);
    }
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      const std::size_t lo = n * w / workers;
      const std::size_t hi = n * (w + 1) / workers;
      try {
        for (std::size_t i = lo; i < hi; ++i) {
          body(i);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) {
    t.join();
  }
  for (auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
}

} // namespace scusum
