// Copyright 2026 the opinion-game authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace opiniongame {

inline int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(begin, end) over a static partition of [0, count). Work items must
// be independent; results must not depend on the partition, so any thread
// count (including 1) produces identical output.
template <typename Fn>
void parallel_for(long long count, int threads, Fn&& fn) {
  if (count <= 0) return;
  int workers = std::min<long long>(resolve_thread_count(threads), count);
  if (workers <= 1) {
    fn(0LL, count);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  long long chunk = (count + workers - 1) / workers;
  for (int t = 0; t < workers; ++t) {
    long long begin = t * chunk;
    long long end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace opiniongame
