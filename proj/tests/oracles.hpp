#pragma once

// Brute-force references for the test suites. Nothing here calls into the
// DP code it is used to check.

#include <cstdint>
#include <functional>
#include <vector>

#include "cornerlab/lattice.hpp"

namespace oracle {

using cornerlab::Site;

struct Brute {
  double best = 0.0;
  std::vector<std::vector<Site>> argmax_paths;  // each path lists sites u..v
  std::size_t path_count = 0;
};

/// Maximizes sum of w over the path's sites excluding v, over all up-right
/// paths u -> v, by explicit enumeration.
inline Brute enumerate(const std::function<double(Site)>& w, Site u, Site v) {
  Brute out;
  bool first = true;
  std::vector<Site> path{u};
  std::function<void(Site, double)> go = [&](Site at, double sum) {
    if (at == v) {
      ++out.path_count;
      if (first || sum > out.best) {
        out.best = sum;
        out.argmax_paths.clear();
        first = false;
      }
      if (sum == out.best) out.argmax_paths.push_back(path);
      return;
    }
    const double here = sum + w(at);
    if (at.x < v.x) {
      path.push_back({at.x + 1, at.y});
      go(path.back(), here);
      path.pop_back();
    }
    if (at.y < v.y) {
      path.push_back({at.x, at.y + 1});
      go(path.back(), here);
      path.pop_back();
    }
  };
  go(u, 0.0);
  return out;
}

/// Tiny deterministic generator for test instances (independent of the
/// library's counter-based RNG).
struct Lcg {
  std::uint64_t state;
  explicit Lcg(std::uint64_t s) : state(s * 2862933555777941757ull + 3037000493ull) {}
  std::uint64_t next() {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    return state >> 33;
  }
  int integer(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }
};

}  // namespace oracle
