#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace eisenlab {

// Worker count used by all parallel loops. 0 means "resolve from EISENLAB_THREADS,
// then hardware concurrency".
void set_thread_count(int n);
int thread_count();

// Calls f(i) for every i in [0, n). Each index is handled by exactly one worker, so
// writing results into slot i keeps the output independent of the thread count.
template <class F>
void parallel_for(std::size_t n, F&& f) {
  int nt = thread_count();
  if (nt <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  auto work = [&] {
    try {
      for (std::size_t i = next++; i < n; i = next++) f(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(err_mu);
      if (!err) err = std::current_exception();
      next = n;
    }
  };
  std::vector<std::thread> pool;
  std::size_t spawn = std::min<std::size_t>(nt, n) - 1;
  for (std::size_t k = 0; k < spawn; ++k) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace eisenlab
