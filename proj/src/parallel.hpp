#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

#include "fiedcmg/laplacian.hpp"

namespace fiedcmg::detail {

// Splits [0, n) into contiguous chunks, one per worker. Falls back to a
// plain loop for small ranges or a thread cap of one.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn, std::size_t min_chunk = 16384) {
  const std::size_t workers =
      std::min<std::size_t>(thread_count(), std::max<std::size_t>(1, n / min_chunk));
  if (workers <= 1) {
    fn(std::size_t{0}, n);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo < hi) pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
  }
  fn(std::size_t{0}, std::min(n, chunk));
}

}  // namespace fiedcmg::detail
