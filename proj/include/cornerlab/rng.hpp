#pragma once

#include <array>
#include <cstdint>

#include "cornerlab/lattice.hpp"

// Counter-based generation: every random quantity is a pure function of
// (seed, stream, counter). There is no generator state to thread through the
// wavefront, so evaluation order and worker count never change a value.

namespace cornerlab::rng {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds (Salmon et al., SC'11).
Counter philox4x32(Counter counter, Key key);

/// Independent streams drawn from the same master seed.
enum class Stream : std::uint32_t {
  Bulk = 0,
  BoundaryHorizontal = 1,
  BoundaryVertical = 2,
  TieBreak = 3,
  TieBreakBackward = 4,
};

std::uint64_t splitmix64(std::uint64_t x);

/// Seed for replicate `index` of an experiment with master seed `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// 64 random bits attached to (seed, stream, site).
std::uint64_t site_bits(std::uint64_t seed, Stream stream, Site s);

/// Uniform on the open interval (0,1), 53-bit resolution.
double to_open_unit(std::uint64_t bits);

inline double site_uniform(std::uint64_t seed, Stream stream, Site s) {
  return to_open_unit(site_bits(seed, stream, s));
}

}  // namespace cornerlab::rng
