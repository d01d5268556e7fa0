// Seeded random source with platform-independent output.
//
// The engine is std::mt19937_64, whose output sequence for a given seed is
// fixed by the C++ standard. The standard distributions are not, so every
// conversion (uniform doubles, bounded integers, Bernoulli draws) is done
// here explicitly. Golden Monte Carlo outputs are therefore identical across
// compilers and platforms.

#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>

namespace gabor {

/// SplitMix64 finalizer; used to derive independent seeds for sub-streams.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound) by rejection (no modulo bias).
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::below: bound must be positive");
    const std::uint64_t limit = std::uint64_t(-1) - (std::uint64_t(-1) % bound);
    std::uint64_t r;
    do {
      r = engine_();
    } while (r >= limit);
    return r % bound;
  }

  bool bernoulli(double p) { return uniform() < p; }

  std::complex<double> unit_phase() { return std::polar(1.0, 2.0 * std::numbers::pi * uniform()); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gabor
