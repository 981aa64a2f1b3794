#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace cap {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Static range split over worker threads. Each chunk is processed
/// independently; results must be written to disjoint, preallocated slots so
/// the outcome does not depend on the thread count.
inline void parallel_for(std::int64_t count, int threads,
                         const std::function<void(std::int64_t, std::int64_t)>& body) {
  threads = resolve_threads(threads);
  if (count <= 0) return;
  if (threads <= 1 || count < 2) {
    body(0, count);
    return;
  }
  const int workers = static_cast<int>(std::min<std::int64_t>(threads, count));
  const std::int64_t chunk = (count + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    const std::int64_t begin = w * chunk;
    const std::int64_t end = std::min<std::int64_t>(begin + chunk, count);
    if (begin >= end) break;
    pool.emplace_back([&body, begin, end] { body(begin, end); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace cap
