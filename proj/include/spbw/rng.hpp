#pragma once

#include <cstdint>
#include <random>

#include "spbw/ring.hpp"

namespace spbw {

// all randomized checks run off one of these so a recorded seed reproduces
// the run byte for byte
struct Rng {
  std::mt19937_64 g;
  explicit Rng(uint64_t seed) : g(seed) {}

  uint64_t next(uint64_t bound) { return bound ? g() % bound : 0; }
  int64_t range(int64_t lo, int64_t hi) { return lo + int64_t(next(uint64_t(hi - lo + 1))); }

  Elem elem(const RingPtr& r);
};

}  // namespace spbw
