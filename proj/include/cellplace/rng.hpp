#pragma once

#include <cstdint>

namespace cellplace {

/// Splittable counter-free PRNG: xoshiro256** seeded through splitmix64
/// from (seed, stream, version). Streams derived from the same seed are
/// independent, so per-restart streams can run in any order. The version
/// constant pins the output sequence; bump it if the algorithm changes.
class Rng {
 public:
  static constexpr std::uint64_t kVersion = 1;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::uint64_t sm = seed * 0x9E3779B97F4A7C15ULL ^ stream * 0xBF58476D1CE4E5B9ULL ^ kVersion;
    for (auto& word : state_) word = splitmix64(sm);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1), 53 bits of precision.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound); bound > 0. Rejection-sampled, unbiased.
  std::uint32_t next_below(std::uint32_t bound) {
    const std::uint64_t threshold = (~std::uint64_t{0}) - (~std::uint64_t{0}) % bound;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= threshold);
    return static_cast<std::uint32_t>(x % bound);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  static std::uint64_t splitmix64(std::uint64_t& s) {
    std::uint64_t z = (s += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_[4];
};

}  // namespace cellplace
