#pragma once

#include <atomic>
#include <cstdlib>
#include <cstddef>
#include <string>
#include <thread>
#include <vector>

namespace unitals {

inline std::size_t default_thread_count() {
  if (const char* env = std::getenv("UNITALS_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  std::size_t hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : hc;
}

namespace detail {
// Block partitioning depends only on n, never on the thread count, so
// per-block results can be folded in block order and reductions stay
// identical from 1 thread to many.
inline std::size_t block_size_for(std::size_t n) {
  constexpr std::size_t kMaxBlocks = 1024;
  std::size_t bs = (n + kMaxBlocks - 1) / kMaxBlocks;
  return bs == 0 ? 1 : bs;
}
}  // namespace detail

// Runs fn(block_index, begin, end) over fixed blocks of [0, n).
template <class Fn>
void parallel_blocks(std::size_t n, std::size_t threads, Fn&& fn) {
  if (n == 0) return;
  const std::size_t bs = detail::block_size_for(n);
  const std::size_t nblocks = (n + bs - 1) / bs;
  if (threads == 0) threads = default_thread_count();
  threads = std::min(threads, nblocks);
  if (threads <= 1) {
    for (std::size_t b = 0; b < nblocks; ++b)
      fn(b, b * bs, std::min(n, (b + 1) * bs));
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t b = next.fetch_add(1);
      if (b >= nblocks) return;
      fn(b, b * bs, std::min(n, (b + 1) * bs));
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

// Maps blocks of [0, n) through map_block(begin, end) -> T and folds the
// per-block values in block order with reduce(acc, value).
template <class T, class MapFn, class ReduceFn>
T parallel_map_reduce(std::size_t n, std::size_t threads, T init,
                      MapFn&& map_block, ReduceFn&& reduce) {
  if (n == 0) return init;
  const std::size_t bs = detail::block_size_for(n);
  const std::size_t nblocks = (n + bs - 1) / bs;
  std::vector<T> results(nblocks, init);
  parallel_blocks(n, threads,
                  [&](std::size_t b, std::size_t begin, std::size_t end) {
                    results[b] = map_block(begin, end);
                  });
  T acc = init;
  for (const T& r : results) acc = reduce(acc, r);
  return acc;
}

}  // namespace unitals
