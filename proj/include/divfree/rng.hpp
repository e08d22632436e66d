#pragma once

#include <cstdint>
#include <random>

namespace divfree {

// Seeds are split with the SplitMix64 recipe: stream i of seed s is seeded by
// mix(s + (i + 1) * golden_gamma). Streams are independent of generation
// order, and advance_seed(s, k) shifts stream indices by k, so frames k.. of
// seed s equal frames 0.. of advance_seed(s, k).

inline constexpr std::uint64_t golden_gamma = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return splitmix64_mix(seed + (stream + 1) * golden_gamma);
}

constexpr std::uint64_t advance_seed(std::uint64_t seed, std::uint64_t offset) noexcept {
  return seed + offset * golden_gamma;
}

/// Standard normal variates from one derived stream.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t stream_seed) : engine_(stream_seed) {}
  double operator()() { return dist_(engine_); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> dist_{0.0, 1.0};
};

}  // namespace divfree
