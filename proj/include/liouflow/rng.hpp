#pragma once

#include <cmath>
#include <cstdint>

namespace liouflow {

/// Seedable counter-mode random stream (splitmix64 finalizer applied to
/// seed + counter), with uniform and Box-Muller normal draws.
///
/// The stream is stateless: draw i depends only on (seed, i), so samples are
/// reproducible, seekable, and safe to generate in parallel. The procedure is
/// fixed:
///   word(i)    = splitmix64(seed + (i+1) * 0x9E3779B97F4A7C15)
///   uniform(i) = ((word(i) >> 11) + 0.5) * 2^-53          in (0, 1)
///   normal pair j: u1 = uniform(2j), u2 = uniform(2j+1),
///     r = sqrt(-2 ln u1), z0 = r cos(2 pi u2), z1 = r sin(2 pi u2)
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t word(std::uint64_t i) const {
    std::uint64_t x = seed_ + (i + 1) * 0x9E3779B97F4A7C15ULL;
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
  }

  /// Uniform double strictly inside (0, 1).
  double uniform(std::uint64_t i) const {
    return (double(word(i) >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Box-Muller pair with index `pair`, consuming uniforms 2*pair, 2*pair+1.
  void normal_pair(std::uint64_t pair, double& z0, double& z1) const {
    const double u1 = uniform(2 * pair);
    const double u2 = uniform(2 * pair + 1);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    z0 = r * std::cos(theta);
    z1 = r * std::sin(theta);
  }

 private:
  std::uint64_t seed_;
};

}  // namespace liouflow
