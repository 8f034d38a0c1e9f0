#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace tailrisk {

/// Number of worker threads for embarrassingly parallel loops; 0 means
/// std::thread::hardware_concurrency().
struct Parallelism {
  unsigned threads = 1;

  unsigned resolved() const {
    if (threads != 0) return threads;
    return std::max(1u, std::thread::hardware_concurrency());
  }
};

/// Runs body(i) for i in [0, n). Results must be written by index; the
/// assignment of indices to threads is unspecified.
template <class Body>
void parallel_for(std::size_t n, Parallelism par, Body&& body) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(par.resolved(), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n);
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (unsigned t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace tailrisk
