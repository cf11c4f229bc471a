#pragma once

#include <cstdint>
#include <random>

#include "tmlab/radial.hpp"

namespace tmlab {

/// Portable random source: draws are defined bit for bit from the 64-bit Mersenne Twister.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Independent stream number `index` of a seed.
  static Rng stream(std::uint64_t seed, std::uint64_t index) {
    return Rng(seed ^ (0x9E3779B97F4A7C15ULL * (index + 1)));
  }
  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  /// Uniform integer in [lo, hi].
  int integer(int lo, int hi) { return lo + static_cast<int>(uniform() * (hi - lo + 1)); }

 private:
  std::mt19937_64 engine_;
};

/// Sum of 1-4 Gaussian bumps exp(-((r-c)/w)^2) - exp(-((1-c)/w)^2) with c in (0,1),
/// w in (0.05, 0.5), log-uniform amplitude in [0.1, 10] and random sign. Dirichlet.
RadialFunction sample_bumps(GridPtr grid, Rng& rng);

/// Nonnegative step profile: 2-6 breakpoints in (0.02, 0.95), levels uniform in [0, 1],
/// zero beyond the last breakpoint.
RadialFunction sample_steps(GridPtr grid, Rng& rng);

/// Positive nonincreasing Dirichlet profile: |bump sum| passed through a running maximum from the boundary.
RadialFunction sample_monotone(GridPtr grid, Rng& rng);

}  // namespace tmlab
