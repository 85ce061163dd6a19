// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace divclust {

inline int default_thread_count() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

// Maps indices [0, n) to per-chunk accumulators and merges them in chunk
// order. `map` is (Acc&, std::size_t index); `merge` is (Acc&, const Acc&).
// The chunking is static, so the merge sequence (and hence the result, given
// an order-insensitive or totally ordered merge) does not depend on the
// thread count.
template <typename Acc, typename Map, typename Merge>
Acc parallel_map_reduce(std::size_t n, int threads, Acc init, Map&& map,
                        Merge&& merge) {
  threads = std::max(1, threads);
  std::size_t chunks = std::min<std::size_t>(threads, std::max<std::size_t>(n, 1));
  if (chunks <= 1 || n <= 1) {
    Acc acc = init;
    for (std::size_t i = 0; i < n; ++i) map(acc, i);
    return acc;
  }
  std::vector<Acc> local(chunks, init);
  std::vector<std::thread> pool;
  pool.reserve(chunks);
  std::size_t per = (n + chunks - 1) / chunks;
  for (std::size_t c = 0; c < chunks; ++c) {
    std::size_t lo = c * per;
    std::size_t hi = std::min(n, lo + per);
    pool.emplace_back([&, c, lo, hi]() {
      for (std::size_t i = lo; i < hi; ++i) map(local[c], i);
    });
  }
  for (auto& t : pool) t.join();
  Acc acc = init;
  for (std::size_t c = 0; c < chunks; ++c) merge(acc, local[c]);
  return acc;
}

}  // namespace divclust
