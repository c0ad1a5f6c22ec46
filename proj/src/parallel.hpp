#pragma once

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cca::detail {

/// Runs fn(k) for k in [0, count) over `threads` workers with static
/// striding. The first exception thrown by any worker (lowest k wins) is
/// rethrown on the caller.
template <class Fn>
void parallel_for(int count, int threads, Fn&& fn) {
  threads = std::clamp(threads, 1, std::max(count, 1));
  if (threads == 1) {
    for (int k = 0; k < count; ++k) fn(k);
    return;
  }
  std::mutex guard;
  int failed_at = count;
  std::exception_ptr failure;
  auto worker = [&](int offset) {
    for (int k = offset; k < count; k += threads) {
      try {
        fn(k);
      } catch (...) {
        std::lock_guard<std::mutex> lock(guard);
        if (k < failed_at) {
          failed_at = k;
          failure = std::current_exception();
        }
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace cca::detail
