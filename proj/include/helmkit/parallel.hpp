#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace helmkit {

/// Fixed-size worker pool handed to the drivers. Work is split into
/// contiguous index blocks, one per worker, so the assignment of indices
/// to threads never affects the values written to per-index slots.
class Executor {
 public:
  explicit Executor(unsigned jobs = 1) : jobs_(std::max(1u, jobs)) {}

  static Executor hardware() {
    return Executor(std::max(1u, std::thread::hardware_concurrency()));
  }

  unsigned jobs() const { return jobs_; }

  /// Calls fn(i) for every i in [0, n). Exceptions are rethrown on the
  /// calling thread (the first one captured wins).
  void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) const {
    if (n == 0) return;
    const std::size_t workers = std::min<std::size_t>(jobs_, n);
    if (workers == 1) {
      for (std::size_t i = 0; i < n; ++i) fn(i);
      return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = n * w / workers;
      const std::size_t end = n * (w + 1) / workers;
      pool.emplace_back([&, begin, end] {
        try {
          for (std::size_t i = begin; i < end; ++i) fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  /// Ordered map: result[i] = fn(i).
  template <class T, class Fn>
  std::vector<T> map(std::size_t n, Fn&& fn) const {
    std::vector<T> out(n);
    parallel_for(n, [&](std::size_t i) { out[i] = fn(i); });
    return out;
  }

 private:
  unsigned jobs_;
};

}  // namespace helmkit
