#pragma once

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

namespace recaudit {

// Runs fn(i) for i in [0, n). Work is split into contiguous static slices so
// the result is identical for any worker count as long as iterations only
// write to their own outputs.
template <typename Fn>
void parallel_for(uint32_t n, int workers, Fn&& fn) {
  if (workers <= 1 || n < 2) {
    for (uint32_t i = 0; i < n; ++i) fn(i);
    return;
  }
  uint32_t w = std::min<uint32_t>(static_cast<uint32_t>(workers), n);
  std::vector<std::thread> threads;
  threads.reserve(w);
  for (uint32_t t = 0; t < w; ++t) {
    uint32_t begin = static_cast<uint32_t>(static_cast<uint64_t>(n) * t / w);
    uint32_t end = static_cast<uint32_t>(static_cast<uint64_t>(n) * (t + 1) / w);
    threads.emplace_back([begin, end, &fn] {
      for (uint32_t i = begin; i < end; ++i) fn(i);
    });
  }
  for (auto& t : threads) t.join();
}

}  // namespace recaudit
