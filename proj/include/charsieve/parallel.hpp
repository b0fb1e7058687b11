#pragma once

#include <algorithm>
#include <string>
#include <thread>
#include <vector>

#include "charsieve/common.hpp"

namespace charsieve {

// Splits [0,n) into at most `workers` contiguous chunks, maps each chunk on
// its own thread, then combines per-chunk results in chunk order.  Results
// are bit-stable for a fixed worker count.
template <class T, class MapFn, class CombineFn>
T parallel_chunks(i64 n, int workers, const T& init, MapFn map_chunk, CombineFn combine) {
  if (workers < 1) workers = 1;
  i64 nchunks = std::min<i64>(workers, std::max<i64>(n, 1));
  if (nchunks <= 1) return map_chunk(0, n);
  std::vector<T> parts(static_cast<size_t>(nchunks), init);
  std::vector<std::thread> threads;
  threads.reserve(static_cast<size_t>(nchunks));
  for (i64 c = 0; c < nchunks; ++c) {
    i64 lo = n * c / nchunks;
    i64 hi = n * (c + 1) / nchunks;
    threads.emplace_back([&parts, &map_chunk, c, lo, hi] { parts[static_cast<size_t>(c)] = map_chunk(lo, hi); });
  }
  for (auto& t : threads) t.join();
  T out = init;
  for (const auto& p : parts) out = combine(out, p);
  return out;
}

inline std::string reduction_shape(int workers) {
  return "ordered-chunks:" + std::to_string(workers < 1 ? 1 : workers);
}

}  // namespace charsieve
