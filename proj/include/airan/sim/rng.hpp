#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "airan/sim/node.hpp"

namespace airan::sim {

/// xoshiro256++ with splitmix64 seeding. Self-contained so that a given
/// (seed, call sequence) produces the same draws on every platform and
/// compiler; <random> distributions do not make that guarantee and would
/// break the run-twice digest contract across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) word = splitmix64(x);
  }

  std::uint64_t next() {
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

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Unbiased integer in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  /// Exponential inter-arrival gap with the given rate (events per unit).
  double exponential(double rate) {
    double u;
    do {
      u = uniform01();
    } while (u <= 0.0);
    return -std::log(u) / rate;
  }

  /// Standard normal via Marsaglia polar; caches the spare draw.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  bool bernoulli(double p) { return uniform01() < p; }

  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::array<std::uint64_t, 4> state_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Derives an independent stream for (root seed, purpose, node). Streams
/// are keyed by node identity, not by registration order, so adding a
/// node never perturbs the draws of existing ones.
inline Rng derive_stream(std::uint64_t root, std::uint64_t purpose, NodeId node) {
  std::uint64_t x = root;
  std::uint64_t a = Rng::splitmix64(x);
  x = a ^ (purpose * 0x9e3779b97f4a7c15ULL);
  a = Rng::splitmix64(x);
  x = a ^ ((static_cast<std::uint64_t>(node.kind) << 32) | node.index);
  return Rng(Rng::splitmix64(x));
}

/// Stream purposes. Fixed tags so scenario evolution does not reshuffle
/// unrelated streams.
namespace streams {
inline constexpr std::uint64_t kTraffic = 1;
inline constexpr std::uint64_t kRadio = 2;
inline constexpr std::uint64_t kMobility = 3;
inline constexpr std::uint64_t kPerception = 4;
inline constexpr std::uint64_t kLoad = 5;
inline constexpr std::uint64_t kFl = 6;
inline constexpr std::uint64_t kRca = 7;
inline constexpr std::uint64_t kLatencyNoise = 8;
inline constexpr std::uint64_t kLifecycle = 9;
}  // namespace streams

}  // namespace airan::sim
