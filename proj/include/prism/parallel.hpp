#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace prism {

/// Runs fn(i) for i in [0, count) on up to `workers` threads.
///
/// Work items are claimed from a shared atomic counter, so scheduling order
/// is arbitrary; callers must write results into per-index slots to stay
/// deterministic. If several items throw, the exception with the lowest
/// index is rethrown after all threads join.
template <typename Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
  if (count == 0) return;
  unsigned n_threads = workers == 0 ? 1u : workers;
  if (n_threads > count) n_threads = static_cast<unsigned>(count);

  if (n_threads == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }

  std::atomic<std::size_t> cursor{0};
  std::mutex error_mutex;
  std::size_t first_error_index = count;
  std::exception_ptr first_error;

  auto body = [&]() {
    for (;;) {
      std::size_t i = cursor.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (i < first_error_index) {
          first_error_index = i;
          first_error = std::current_exception();
        }
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(body);
  for (auto& th : pool) th.join();

  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace prism
