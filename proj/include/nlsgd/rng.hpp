#pragma once

#include <cmath>
#include <cstdint>

namespace nlsgd {

// splitmix64: tiny, fast, passes BigCrush-level smoke tests for this use.
// Satisfies UniformRandomBitGenerator so std:: distributions accept it.
struct SplitMix64 {
  using result_type = std::uint64_t;
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
};

// Decorrelated child seed for stream `index` of `base`: one extra scramble of
// base xor golden-ratio multiple. Used for per-trial and per-shard generators
// so any worker count replays identical draws.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  SplitMix64 g(base ^ (0x9E3779B97F4A7C15ull * (index + 1)));
  return g();
}

// Uniform on [0,1) with 53-bit resolution.
inline double uniform01(SplitMix64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

// Uniform on (0,1]: never zero, safe under log and negative powers.
inline double uniform_open01(SplitMix64& g) { return 1.0 - uniform01(g); }

inline double normal(SplitMix64& g) {
  double u = uniform_open01(g);
  double v = uniform01(g);
  return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586 * v);
}

inline double exponential(SplitMix64& g, double lambda) {
  return -std::log(uniform_open01(g)) / lambda;
}

}  // namespace nlsgd
