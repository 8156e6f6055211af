#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace spectralset::detail {

/// Worker cap: min(hardware threads, SPECTRALSET_THREADS if set). Results must
/// not depend on the partition, so callers write to per-index slots and reduce
/// in index order afterwards.
inline int thread_cap() {
  int cap = static_cast<int>(std::thread::hardware_concurrency());
  if (cap < 1) cap = 1;
  if (const char* env = std::getenv("SPECTRALSET_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) cap = std::min<long>(cap, v);
  }
  return cap;
}

template <typename Fn>
void parallel_for(int n, Fn&& fn) {
  if (n <= 0) return;
  const int workers = std::min(n, thread_cap());
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(workers - 1);
  for (int t = 1; t < workers; ++t) threads.emplace_back(body);
  body();
  for (auto& th : threads) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace spectralset::detail
