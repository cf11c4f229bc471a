#include "tmlab/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace tmlab {

RadialFunction sample_bumps(GridPtr grid, Rng& rng) {
  const int count = rng.integer(1, 4);
  struct Bump {
    double c, w, a;
  };
  std::vector<Bump> bumps;
  for (int i = 0; i < count; ++i) {
    const double c = rng.uniform();
    const double w = rng.uniform(0.05, 0.5);
    const double mag = std::exp(rng.uniform(std::log(0.1), std::log(10.0)));
    const double a = rng.uniform() < 0.5 ? -mag : mag;
    bumps.push_back({c, w, a});
  }
  return RadialFunction::sample(
      std::move(grid),
      [&](double r) {
        double s = 0.0;
        for (const Bump& b : bumps) {
          const double t = (r - b.c) / b.w;
          const double e = (1.0 - b.c) / b.w;
          s += b.a * (std::exp(-t * t) - std::exp(-e * e));
        }
        return s;
      },
      true);
}

RadialFunction sample_steps(GridPtr grid, Rng& rng) {
  const int count = rng.integer(2, 6);
  std::vector<double> breaks(static_cast<std::size_t>(count));
  for (double& b : breaks) b = rng.uniform(0.02, 0.95);
  std::sort(breaks.begin(), breaks.end());
  std::vector<double> levels(breaks.size());
  for (double& v : levels) v = rng.uniform();
  return RadialFunction::sample(
      std::move(grid),
      [&](double r) {
        const auto it = std::upper_bound(breaks.begin(), breaks.end(), r);
        return it == breaks.end() ? 0.0 : levels[static_cast<std::size_t>(it - breaks.begin())];
      },
      true);
}

RadialFunction sample_monotone(GridPtr grid, Rng& rng) {
  RadialFunction b = sample_bumps(grid, rng).abs();
  std::vector<double> v = b.values();
  for (std::size_t i = v.size() - 1; i-- > 0;) v[i] = std::max(v[i], v[i + 1]);
  return b.with_values(std::move(v));
}

}  // namespace tmlab
