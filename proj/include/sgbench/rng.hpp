#pragma once

#include <cmath>
#include <cstdint>

namespace sgbench {

// SplitMix64 step; expands seeds and mixes stream keys.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derive an independent sub-seed from a base seed and up to three keys.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t k1,
                                 std::uint64_t k2 = 0, std::uint64_t k3 = 0) {
  std::uint64_t s = seed;
  std::uint64_t h = splitmix64(s);
  s ^= 0x9e3779b97f4a7c15ULL * (k1 + 1);
  h ^= splitmix64(s);
  s ^= 0xc2b2ae3d27d4eb4fULL * (k2 + 1);
  h ^= splitmix64(s);
  s ^= 0x165667b19e3779f9ULL * (k3 + 1);
  h ^= splitmix64(s);
  return h;
}

// xoshiro256++ generator. Arithmetic is fully specified, so streams are
// bit-reproducible across platforms and standard library versions (the
// <random> distributions are not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& w : state_) w = splitmix64(s);
  }

  // Stream addressed by a base seed and up to three keys. Equal keys give
  // the identical stream; any differing key gives an unrelated one.
  static Rng keyed(std::uint64_t seed, std::uint64_t k1, std::uint64_t k2 = 0,
                   std::uint64_t k3 = 0) {
    return Rng(derive_seed(seed, k1, k2, k3));
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; one draw consumes two uniforms.
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586 * u2);
  }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t state_[4];
};

// Fixed stream tags so independent consumers never share a stream.
namespace streams {
inline constexpr std::uint64_t init = 1;     // parameter initialization
inline constexpr std::uint64_t dropout = 2;  // per epoch/example dropout masks
inline constexpr std::uint64_t synth = 3;    // synthetic series generation
inline constexpr std::uint64_t fixture = 4;  // fixture structure (plants, edges, inactive set)
inline constexpr std::uint64_t layout = 5;   // figure force-layout start positions
}  // namespace streams

}  // namespace sgbench
