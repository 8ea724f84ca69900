#pragma once

// Counter-keyed random streams: every Monte Carlo realization draws from its
// own xoshiro256** generator whose state is derived from (seed, purpose,
// index) with SplitMix64, so results never depend on scheduling.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace mcpdist {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// xoshiro256** keyed by (seed, purpose, index). Satisfies
/// UniformRandomBitGenerator.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream(std::uint64_t seed, std::uint64_t purpose, std::uint64_t index) {
    std::uint64_t key = seed;
    std::uint64_t mixed = splitmix64(key) ^ purpose;
    mixed = splitmix64(mixed) ^ index;
    std::uint64_t sm = splitmix64(mixed);
    for (auto& word : s_) word = splitmix64(sm);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t s_[4];
};

/// Poisson variate: sequential inversion for mean <= 30, Hörmann's PTRS
/// transformed rejection above.
std::uint64_t sample_poisson(RandomStream& rng, double mean);

}  // namespace mcpdist
