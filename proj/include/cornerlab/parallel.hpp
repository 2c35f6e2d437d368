#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cornerlab {

/// Resolves a requested worker count; 0 means hardware concurrency.
inline int resolve_workers(int requested) {
  if (requested > 0) return requested;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

/// Runs fn(i) for i in [0, n). Items are dealt round-robin to workers; fn
/// must only write state owned by index i.
template <class Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
  const auto w = static_cast<std::size_t>(std::max(1, workers));
  if (w == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    const std::size_t used = std::min(w, n);
    pool.reserve(used);
    for (std::size_t t = 0; t < used; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t i = t; i < n; i += used) fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

/// Anti-diagonal wavefront over a grid of tiles. Tile (r, c) runs after
/// (r-1, c) and (r, c-1); tiles on one anti-diagonal run concurrently.
template <class Fn>
void wavefront(std::size_t tile_rows, std::size_t tile_cols, int workers, Fn&& fn) {
  for (std::size_t d = 0; d + 1 < tile_rows + tile_cols; ++d) {
    const std::size_t r_lo = d >= tile_cols ? d - tile_cols + 1 : 0;
    const std::size_t r_hi = std::min(d, tile_rows - 1);
    parallel_for(r_hi - r_lo + 1, workers, [&](std::size_t i) {
      const std::size_t r = r_lo + i;
      fn(r, d - r);
    });
  }
}

}  // namespace cornerlab
