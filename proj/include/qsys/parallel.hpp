#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace qsys {

/// Global cap on worker threads (0 = hardware concurrency).
void set_thread_count(unsigned threads);
unsigned thread_count();

/// Splits [0, count) into fixed-size blocks and calls fn(block, begin, end)
/// for every block, distributed over worker threads. Block boundaries do not
/// depend on the thread count, so per-block partial results combined in block
/// order give schedule-independent totals.
template <class Fn>
void parallel_blocks(size_t count, size_t block_size, Fn&& fn) {
  if (count == 0) return;
  block_size = std::max<size_t>(block_size, 1);
  const size_t blocks = (count + block_size - 1) / block_size;
  const size_t workers = std::min<size_t>(thread_count(), blocks);
  auto run_block = [&](size_t b) {
    const size_t begin = b * block_size;
    fn(b, begin, std::min(count, begin + block_size));
  };
  if (workers <= 1) {
    for (size_t b = 0; b < blocks; ++b) run_block(b);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (size_t b = w; b < blocks; b += workers) run_block(b);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

inline size_t block_count(size_t count, size_t block_size) {
  return (count + block_size - 1) / block_size;
}

}  // namespace qsys
