#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "tmlab/errors.hpp"
#include "tmlab/probe.hpp"
#include "tmlab/sampling.hpp"

namespace tmlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Linear finite elements on the interior unknowns 0..n-2; the last node is the
// Dirichlet boundary. Matrices include the 2 pi factor of the disk.
struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;  // off[i] couples i and i+1

  std::vector<double> apply(const std::vector<double>& u) const {
    const std::size_t m = diag.size();
    std::vector<double> y(m);
    for (std::size_t i = 0; i < m; ++i) {
      double s = diag[i] * u[i];
      if (i > 0) s += off[i - 1] * u[i - 1];
      if (i + 1 < m) s += off[i] * u[i + 1];
      y[i] = s;
    }
    return y;
  }

  std::vector<double> solve(std::vector<double> b) const {
    const std::size_t m = diag.size();
    std::vector<double> c(m, 0.0);
    double d = diag[0];
    for (std::size_t i = 0; i < m; ++i) {
      if (i > 0) {
        d = diag[i] - off[i - 1] * c[i - 1];
        b[i] -= off[i - 1] * b[i - 1];
      }
      if (i + 1 < m) c[i] = off[i] / d;
      b[i] /= d;
    }
    for (std::size_t i = m - 1; i-- > 0;) b[i] -= c[i] * b[i + 1];
    return b;
  }
};

Tridiagonal stiffness(const RadialGrid& g) {
  const auto& r = g.nodes();
  const std::size_t m = r.size() - 1;
  Tridiagonal K{std::vector<double>(m, 0.0), std::vector<double>(m > 0 ? m - 1 : 0, 0.0)};
  for (std::size_t c = 0; c + 1 < r.size(); ++c) {
    const double k = kTwoPi * 0.5 * (r[c] + r[c + 1]) / (r[c + 1] - r[c]);
    K.diag[c] += k;
    if (c + 1 < m) {
      K.diag[c + 1] += k;
      K.off[c] -= k;
    }
  }
  return K;
}

Tridiagonal mass(const RadialGrid& g) {
  const auto& r = g.nodes();
  const std::size_t m = r.size() - 1;
  Tridiagonal M{std::vector<double>(m, 0.0), std::vector<double>(m > 0 ? m - 1 : 0, 0.0)};
  M.diag[0] += kTwoPi * 0.5 * r[0] * r[0];
  for (std::size_t c = 0; c + 1 < r.size(); ++c) {
    const double a = r[c];
    const double b = r[c + 1];
    const double h = b - a;
    M.diag[c] += kTwoPi * h * (3.0 * a + b) / 12.0;
    if (c + 1 < m) {
      M.diag[c + 1] += kTwoPi * h * (a + 3.0 * b) / 12.0;
      M.off[c] += kTwoPi * h * (a + b) / 12.0;
    }
  }
  return M;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  kernels::Accumulator acc;
  for (std::size_t i = 0; i < a.size(); ++i) acc.add(a[i] * b[i]);
  return acc.value();
}

// Load vector of the functional v -> 2 pi int |u|^(p-2) u v r dr, matching
// the quadrature used by lp_norm.
std::vector<double> power_load(const RadialGrid& g, const std::vector<double>& u, double p) {
  const auto& r = g.nodes();
  const std::size_t m = r.size() - 1;
  std::vector<double> b(m, 0.0);
  auto nl = [p](double x) { return std::pow(std::fabs(x), p - 2.0) * x; };
  b[0] += kTwoPi * 0.5 * r[0] * r[0] * nl(u[0]);
  for (std::size_t c = 0; c + 1 < r.size(); ++c) {
    const double h = r[c + 1] - r[c];
    const double ua = u[c];
    const double ub = c + 1 < m ? u[c + 1] : 0.0;
    for (int q = 0; q < 2; ++q) {
      const double t = quad::kGaussT[q];
      const double f = kTwoPi * quad::kGaussW[q] * h * nl(ua + t * (ub - ua)) * (r[c] + t * h);
      b[c] += f * (1.0 - t);
      if (c + 1 < m) b[c + 1] += f * t;
    }
  }
  return b;
}

}  // namespace

LambdaEstimate estimate_lambda_1(GridPtr grid) {
  const auto& r = grid->nodes();
  const std::size_t m = r.size() - 1;
  if (m < 2) throw InvalidInput("lambda_1 needs at least 3 nodes");
  const Tridiagonal K = stiffness(*grid);
  const Tridiagonal M = mass(*grid);
  std::vector<double> u(m);
  for (std::size_t i = 0; i < m; ++i) u[i] = 1.0 - r[i] * r[i];
  double lambda = 0.0;
  std::size_t it = 0;
  for (; it < 500; ++it) {
    std::vector<double> y = K.solve(M.apply(u));
    const double next = dot(y, K.apply(y)) / dot(y, M.apply(y));
    const double top = *std::max_element(y.begin(), y.end());
    for (double& v : y) v /= top;
    u = std::move(y);
    const bool done = std::fabs(next - lambda) <= 1e-15 * next;
    lambda = next;
    if (done) break;
  }
  u.push_back(0.0);
  LambdaEstimate out{lambda, RadialFunction(grid, std::move(u), true), it + 1, lambda, lambda};
  return out;
}

LambdaEstimate estimate_lambda_p(double p, GridPtr grid, std::size_t starts, std::uint64_t seed) {
  if (!(p > 2.0) || !std::isfinite(p)) throw InvalidInput("lambda_p requires p > 2");
  if (starts == 0) throw InvalidInput("lambda_p needs at least one start");
  const Tridiagonal K = stiffness(*grid);

  struct Run {
    double value = std::numeric_limits<double>::infinity();
    std::vector<double> u;
    std::size_t iterations = 0;
  };
  std::vector<Run> runs(starts);
  kernels::parallel_for(starts, [&](std::size_t s) {
    Rng rng = Rng::stream(seed, s);
    const RadialFunction start = sample_bumps(grid, rng).abs();
    std::vector<double> u(start.values().begin(), start.values().end() - 1);
    auto normalize = [&](std::vector<double>& v) {
      std::vector<double> w(v);
      w.push_back(0.0);
      const double n = lp_norm(RadialFunction(grid, std::move(w), true), p, Exec::serial);
      for (double& x : v) x /= n;
    };
    normalize(u);
    double value = dot(u, K.apply(u));
    std::size_t it = 0;
    for (; it < 5000; ++it) {
      std::vector<double> y = K.solve(power_load(*grid, u, p));
      normalize(y);
      const double next = dot(y, K.apply(y));
      u = std::move(y);
      const bool done = value - next <= 1e-14 * next;
      value = std::min(value, next);
      if (done) break;
    }
    runs[s] = Run{value, std::move(u), it + 1};
  });

  std::size_t best = 0;
  double lo = runs[0].value;
  double hi = runs[0].value;
  for (std::size_t s = 1; s < starts; ++s) {
    lo = std::min(lo, runs[s].value);
    hi = std::max(hi, runs[s].value);
    if (runs[s].value < runs[best].value) best = s;
  }
  std::vector<double> u = runs[best].u;
  const double top = *std::max_element(u.begin(), u.end());
  for (double& v : u) v /= top;
  u.push_back(0.0);
  return LambdaEstimate{runs[best].value, RadialFunction(grid, std::move(u), true), runs[best].iterations, lo, hi};
}

}  // namespace tmlab
