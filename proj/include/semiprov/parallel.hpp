#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace semiprov {

/// Smallest index in [0, count) for which `fails(index)` is true. With more
/// than one thread, indices are strided across workers; the answer is the same
/// as the sequential scan.
template <class F>
std::optional<std::uint64_t> first_failing(std::uint64_t count, unsigned threads, F&& fails) {
  if (threads <= 1 || count < 2) {
    for (std::uint64_t i = 0; i < count; ++i)
      if (fails(i)) return i;
    return std::nullopt;
  }
  std::atomic<std::uint64_t> best{count};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  const unsigned n = static_cast<unsigned>(std::min<std::uint64_t>(threads, count));
  for (unsigned t = 0; t < n; ++t) {
    workers.emplace_back([&, t] {
      try {
        for (std::uint64_t i = t; i < best.load(std::memory_order_relaxed); i += n) {
          if (fails(i)) {
            std::uint64_t cur = best.load();
            while (i < cur && !best.compare_exchange_weak(cur, i)) {
            }
            return;
          }
        }
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        best.store(0);
      }
    });
  }
  for (auto& w : workers) w.join();
  if (error) std::rethrow_exception(error);
  const std::uint64_t b = best.load();
  if (b < count) return b;
  return std::nullopt;
}

}  // namespace semiprov
