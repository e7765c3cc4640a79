#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace cavsq {

// Worker cap from CAVSQ_THREADS; 0 or unset means hardware concurrency.
inline unsigned thread_count_from_env() {
  unsigned n = 0;
  if (const char* env = std::getenv("CAVSQ_THREADS")) {
    try {
      n = static_cast<unsigned>(std::stoul(env));
    } catch (const std::exception&) {
      n = 0;
    }
  }
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

// Calls fn(i) for i in [0, count). Each index writes only its own output
// slot, so results are independent of scheduling. The first exception (by
// index) is rethrown after all workers finish.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn, unsigned threads = 1) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t failed_index = count;
  std::exception_ptr failure;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (i < failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace cavsq
