#pragma once

#include <cmath>
#include <cstdint>

namespace mplcp {

// Stafford variant 13 of the 64-bit avalanche finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

constexpr std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
  return mix64(a + 0x9e3779b97f4a7c15ULL * (b + 1));
}

// Counter-based generator: the state is a counter advanced by a fixed odd
// increment and the output is its mixed value.  Distinct (seed, stream)
// pairs yield decorrelated sequences, so parallel trials can use
// stream(seed, i) without sharing state.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static SplitMix64 stream(std::uint64_t seed, std::uint64_t stream_id) {
    return SplitMix64(hash_combine(mix64(seed), stream_id));
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  // Uniform on [0, 1), 53-bit resolution.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double next_uniform(double a, double b) {
    return a + (b - a) * next_unit();
  }

 private:
  std::uint64_t state_;
};

// Number of arrivals of a unit-rate process before time `mean`: exact Poisson
// sampling for any mean without underflow, O(mean) draws.
inline std::uint64_t poisson_count(SplitMix64& rng, double mean) {
  if (!(mean > 0)) return 0;
  double acc = 0;
  std::uint64_t n = 0;
  for (;;) {
    acc += -std::log1p(-rng.next_unit());
    if (acc > mean) return n;
    ++n;
  }
}

}  // namespace mplcp
