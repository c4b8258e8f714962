#pragma once

#include <cstdint>

namespace ell4 {

// xorshift64* seeded through one splitmix64 step; same stream on every
// platform. Documented in the README for reproducible cross-sections.
struct Xorshift64Star {
  uint64_t state;

  explicit Xorshift64Star(uint64_t seed) {
    uint64_t z = seed + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    state = (z ^ (z >> 31)) | 1ULL;
  }

  uint64_t next() {
    uint64_t x = state;
    x ^= x >> 12;
    x ^= x << 25;
    x ^= x >> 27;
    state = x;
    return x * 0x2545f4914f6cdd1dULL;
  }

  // dyadic rational in [-1, 1): bit-identical across platforms
  double uniform_pm1() { return static_cast<double>(next() >> 11) * 0x1p-52 - 1.0; }

  // uniform in [0, 1)
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1p-53; }
};

}  // namespace ell4
