#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

namespace copinfo {

// Runs body(i) for i in [0, n).  Work items are claimed atomically, so the
// mapping from index to thread is scheduling-dependent, but callers write
// results by index; outputs must not depend on which thread ran an item.
// threads <= 0 selects the hardware concurrency.  The first exception
// thrown by any item is rethrown after all threads join.
template <typename F>
void parallel_for(std::size_t n, int threads, F&& body) {
  if (n == 0) return;
  unsigned hw = std::thread::hardware_concurrency();
  std::size_t want = threads > 0 ? std::size_t(threads) : std::size_t(hw ? hw : 1);
  if (want > n) want = n;
  if (want <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(want);
  for (std::size_t t = 0; t < want; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace copinfo
