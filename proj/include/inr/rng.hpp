#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace inr {

/// SplitMix64 step; used for seeding and for deriving sub-seeds.
constexpr std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Independent stream identifiers. Every random component draws from
/// derive_seed(master, stream) so changing one never perturbs another.
enum class SeedStream : std::uint64_t {
  Mask = 1,
  Noise = 2,
  Embedding = 3,
  ImageNet = 4,
  SensitivityNet = 5,
  SensitivityEmbedding = 6,
};

constexpr std::uint64_t derive_seed(std::uint64_t master, SeedStream stream) {
  std::uint64_t s = master ^ (static_cast<std::uint64_t>(stream) * 0xd1b54a32d192ed03ULL);
  return splitmix64(s);
}

/// xoshiro256** 1.0. Output sequence is fully specified by the published
/// update rule, so draws are identical on every platform.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
  }

  std::uint64_t next() {
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

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform in (0, 1]; safe to take the logarithm of.
  double uniform_open0() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller. Each call consumes two uniforms and
  /// returns the cosine branch only, keeping the draw order trivial.
  double normal() {
    const double u1 = uniform_open0();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
};

}  // namespace inr
