// Copyright (c) the floqmet developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace floqmet {

/// Runs fn(0) .. fn(n - 1) on a bounded pool of `workers` threads
/// (<= 0: hardware concurrency).  Items are claimed from a shared counter;
/// the first exception is rethrown on the caller after all threads join.
template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
  if (n == 0) return;
  unsigned hw = std::thread::hardware_concurrency();
  std::size_t pool = workers > 0 ? static_cast<std::size_t>(workers)
                                 : (hw > 0 ? hw : 1);
  if (pool > n) pool = n;
  if (pool <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::vector<std::thread> threads;
  threads.reserve(pool);
  for (std::size_t w = 0; w < pool; ++w) {
    threads.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= n || failed.load()) return;
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

} // namespace floqmet
