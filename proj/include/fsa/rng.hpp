#pragma once
#include <cstdint>

namespace fsa {

// splitmix64; per-trial substreams are seeded with (seed + trial index) so a
// sweep can hand every trial an independent, reproducible stream.
struct SplitMix64 {
  uint64_t state;

  explicit SplitMix64(uint64_t seed) : state(seed) {}

  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // unbiased via rejection
  uint64_t below(uint64_t n) {
    uint64_t lim = -n % n;  // 2^64 mod n
    for (;;) {
      uint64_t r = next();
      if (r >= lim) return r % n;
    }
  }

  // true with probability threshold / 2^64
  bool bernoulli_u64(uint64_t threshold) { return next() < threshold; }
};

inline SplitMix64 substream(uint64_t seed, uint64_t trial) {
  return SplitMix64(seed + trial);
}

}  // namespace fsa
