#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace drrbfpu::detail {

/// Runs body(i) for i in [0, count) across hardware threads. Each index is
/// processed exactly once; results must be written to per-index slots so the
/// outcome is identical for any thread count. The first exception is rethrown.
inline void parallel_for(int count, const std::function<void(int)>& body) {
  if (count <= 0) return;
  unsigned hw = std::thread::hardware_concurrency();
  int n_threads = int(hw == 0 ? 1 : hw);
  if (n_threads > count) n_threads = count;
  if (n_threads <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }

  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&]() {
    while (!failed.load(std::memory_order_relaxed)) {
      int i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace drrbfpu::detail
