#pragma once

// Block-parallel map with an ordered merge. Results are combined in block
// order, so any worker count yields the same value for an associative merge.

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fflab {

struct Parallelism {
  /// 0 means std::thread::hardware_concurrency().
  unsigned workers = 1;

  unsigned resolved() const {
    if (workers != 0) return workers;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
  }
};

/// Runs body(block) for block in [0, blocks) on up to par.resolved() threads
/// and returns the per-block results in block order.
template <class Result, class Body>
std::vector<Result> parallel_blocks(std::size_t blocks, Parallelism par, Body&& body) {
  std::vector<Result> results(blocks);
  const std::size_t threads = std::min<std::size_t>(par.resolved(), blocks);
  if (threads <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) results[b] = body(b);
    return results;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t b = t; b < blocks; b += threads) {
        try {
          results[b] = body(b);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace fflab
