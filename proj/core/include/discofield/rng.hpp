#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace discofield {

/// Counter-based deterministic generator. Every draw is a pure function of
/// (seed, stream, counter), so parallel or reordered evaluation cannot change
/// the sample sequence.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t bits(std::uint64_t stream, std::uint64_t counter) const {
    // splitmix64 finalizer over a Weyl-mixed key.
    std::uint64_t z = seed_ + 0x9E3779B97F4A7C15ULL * (stream + 1) +
                      0xBF58476D1CE4E5B9ULL * (counter + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform(std::uint64_t stream, std::uint64_t counter) const {
    return static_cast<double>(bits(stream, counter) >> 11) * 0x1.0p-53;
  }

  /// Uniform in [lo, hi).
  double uniform(std::uint64_t stream, std::uint64_t counter, double lo,
                 double hi) const {
    return lo + (hi - lo) * uniform(stream, counter);
  }

  /// Standard normal via Box-Muller on counters (2c, 2c+1).
  double normal(std::uint64_t stream, std::uint64_t counter) const {
    const double u1 = uniform(stream, 2 * counter);
    const double u2 = uniform(stream, 2 * counter + 1);
    const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

}  // namespace discofield
