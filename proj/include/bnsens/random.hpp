#pragma once

// Seeded random streams with platform-independent output.
//
// std::mt19937_64 is fully specified by the standard, but the <random>
// distributions are not, so uniform and normal variates are derived here
// from the raw 64-bit output.

#include <cstdint>
#include <random>

namespace bnsens {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of the stream for (master, index). Each index is hashed on its own,
/// so stream k does not depend on how many other streams exist.
constexpr std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(mix64(master) ^ mix64(index + 0x5851f42d4c957f2dULL));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on the open interval (0, 1).
  double uniform_open01() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal, Marsaglia polar method. Each call consumes a whole
  /// number of pairs and caches nothing, so the stream position after k
  /// calls is a function of the draws alone.
  double standard_normal();

  /// Integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

  /// Gamma(shape, 1), Marsaglia-Tsang. shape > 0.
  double gamma(double shape);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace bnsens
