#pragma once

#include <cmath>
#include <cstdint>

namespace taskplan {

// PCG32 (Melissa O'Neill's minimal generator). Self-contained so that every
// sampled value is bit-stable across platforms and standard libraries.
struct Pcg32 {
  uint64_t state = 0x853c49e6748fea9bULL;
  uint64_t inc = 0xda3e39cb94b95bdbULL;

  Pcg32() = default;
  explicit Pcg32(uint64_t seed, uint64_t stream = 0) { reseed(seed, stream); }

  void reseed(uint64_t seed, uint64_t stream = 0) {
    state = 0;
    inc = (stream << 1u) | 1u;
    next_u32();
    state += seed;
    next_u32();
  }

  uint32_t next_u32() {
    uint64_t old = state;
    state = old * 6364136223846793005ULL + inc;
    uint32_t xorshifted = static_cast<uint32_t>(((old >> 18u) ^ old) >> 27u);
    uint32_t rot = static_cast<uint32_t>(old >> 59u);
    return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
  }

  uint64_t next_u64() {
    return (static_cast<uint64_t>(next_u32()) << 32) | next_u32();
  }

  // Unbiased integer in [0, n). n must be > 0.
  uint32_t uniform_int(uint32_t n) {
    uint32_t threshold = (0u - n) % n;
    for (;;) {
      uint32_t r = next_u32();
      if (r >= threshold) return r % n;
    }
  }

  int range(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(uniform_int(static_cast<uint32_t>(hi - lo + 1)));
  }

  double uniform() { return next_u32() * (1.0 / 4294967296.0); }

  double normal() {
    // Box-Muller, no caching so the call sequence stays easy to reason about.
    double u1, u2;
    do {
      u1 = uniform();
    } while (u1 <= 1e-12);
    u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Derived generator for a named sub-stream; independent of draws on *this.
  Pcg32 fork(uint64_t stream_tag) const {
    return Pcg32(state ^ 0x9e3779b97f4a7c15ULL, stream_tag);
  }
};

}  // namespace taskplan
