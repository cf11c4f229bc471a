#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

#include "tmlab/errors.hpp"

namespace tmlab::ode {

struct Tolerance {
  double rtol = 1e-10;
  double atol = 1e-12;
};

/// Dormand-Prince 5(4) with error control, advancing y from t0 to exactly t1.
/// `h` carries the step size between calls. `check(t, y)` runs after every
/// accepted step and may throw to abort.
template <std::size_t N, class F, class Check>
std::array<double, N> advance(F&& f, double t0, std::array<double, N> y, double t1, double& h,
                              const Tolerance& tol, Check&& check) {
  using State = std::array<double, N>;
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                          b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;

  auto combo = [&](const State& base, double step, std::initializer_list<std::pair<double, const State*>> terms) {
    State out = base;
    for (const auto& [c, k] : terms)
      for (std::size_t i = 0; i < N; ++i) out[i] += step * c * (*k)[i];
    return out;
  };

  double t = t0;
  State k1 = f(t, y);
  while (t < t1) {
    const double remaining = t1 - t;
    const bool last = h >= remaining;
    const double step = last ? remaining : h;
    if (step <= 1e-14 * std::max(1.0, std::fabs(t))) throw StepFailure("step size underflow in ODE integration");
    const State k2 = f(t + c2 * step, combo(y, step, {{a21, &k1}}));
    const State k3 = f(t + c3 * step, combo(y, step, {{a31, &k1}, {a32, &k2}}));
    const State k4 = f(t + c4 * step, combo(y, step, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const State k5 = f(t + c5 * step, combo(y, step, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const State k6 =
        f(t + step, combo(y, step, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    const State y5 = combo(y, step, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const State k7 = f(t + step, y5);
    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double e =
          step * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc = tol.atol + tol.rtol * std::max(std::fabs(y[i]), std::fabs(y5[i]));
      err = std::max(err, std::fabs(e) / sc);
    }
    if (!std::isfinite(err)) {
      h = 0.2 * step;
      continue;
    }
    const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    if (err <= 1.0) {
      t = last ? t1 : t + step;
      y = y5;
      k1 = k7;
      check(t, y);
      if (!last || factor < 1.0) h = step * factor;
    } else {
      h = step * factor;
    }
  }
  return y;
}

}  // namespace tmlab::ode
