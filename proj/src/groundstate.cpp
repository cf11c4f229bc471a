#include "tmlab/groundstate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "tmlab/errors.hpp"
#include "tmlab/ode.hpp"

namespace tmlab {

namespace {

constexpr double kLn10 = std::numbers::ln10;

double logit(double r) { return std::log(r) - std::log1p(-r); }
double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }
double sigmoid_c(double z) { return 1.0 / (1.0 + std::exp(z)); }

// Piecewise cubic through four neighbouring samples of h(z), integrated exactly.
class CubicIntegral {
 public:
  CubicIntegral(std::vector<double> z, std::vector<double> h) : z_(std::move(z)), h_(std::move(h)) {
    cum_.assign(z_.size(), 0.0);
    kernels::Accumulator acc;
    for (std::size_t i = 0; i + 1 < z_.size(); ++i) {
      acc.add(partial(i, z_[i + 1]));
      cum_[i + 1] = acc.value();
    }
  }

  const std::vector<double>& cumulative() const noexcept { return cum_; }

  /// Integral from z_[0] to z.
  double at(double z) const {
    if (z <= z_.front()) return 0.0;
    if (z >= z_.back()) return cum_.back();
    const std::size_t i =
        static_cast<std::size_t>(std::upper_bound(z_.begin(), z_.end(), z) - z_.begin()) - 1;
    return cum_[i] + partial(i, z);
  }

 private:
  double interp(std::size_t cell, double z) const {
    const std::size_t m = z_.size();
    if (m < 4) {
      const double t = (z - z_[cell]) / (z_[cell + 1] - z_[cell]);
      return h_[cell] + t * (h_[cell + 1] - h_[cell]);
    }
    const std::size_t j0 = std::min(cell > 0 ? cell - 1 : 0, m - 4);
    double s = 0.0;
    for (std::size_t a = j0; a < j0 + 4; ++a) {
      double w = 1.0;
      for (std::size_t b = j0; b < j0 + 4; ++b)
        if (b != a) w *= (z - z_[b]) / (z_[a] - z_[b]);
      s += w * h_[a];
    }
    return s;
  }
  // Integral over [z_[cell], z] with z inside the cell.
  double partial(std::size_t cell, double z) const {
    const double a = z_[cell];
    const double len = z - a;
    double s = 0.0;
    for (int g = 0; g < 2; ++g) s += quad::kGaussW[g] * interp(cell, a + quad::kGaussT[g] * len);
    return s * len;
  }

  std::vector<double> z_;
  std::vector<double> h_;
  std::vector<double> cum_;
};

}  // namespace

std::string to_string(Coercivity c) {
  switch (c) {
    case Coercivity::WeaklyCoercive:
      return "WeaklyCoercive";
    case Coercivity::GroundStateDetected:
      return "GroundStateDetected";
    case Coercivity::Indefinite:
      return "Indefinite";
  }
  return "Indefinite";
}

RadialFunction GroundStateResult::s_table() const {
  std::vector<double> s(log_s.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::exp(log_s[i]);
  return phi.with_values(std::move(s));
}

GroundStateResult shoot(const PotentialSpec& spec, GridPtr grid, const ShootOptions& opt) {
  const auto& r = grid->nodes();
  const std::size_t n = r.size();
  if (n < 3) throw InvalidInput("shooting needs at least 3 nodes");
  const std::size_t m = n - 1;

  const double r0 = r[0];
  const double x0 = 1.0 - r0;
  const double l0 = -std::log(r0);
  const double v0 = spec.at(r0, x0);
  if (!std::isfinite(v0)) throw SingularEvaluation("potential is not finite", r0);
  double c = l0 * l0 * r0 * r0 * v0;
  if (c > 0.25 * (1.0 + 1e-9)) throw NodalSolution("solution oscillates at the center", r0);
  c = std::clamp(c, -std::numeric_limits<double>::max(), 0.25);
  const double a = 2.0 * c / (1.0 + std::sqrt(1.0 - 4.0 * c));

  auto rhs = [&spec](double z, const std::array<double, 2>& y) {
    const double rr = sigmoid(z);
    const double xx = sigmoid_c(z);
    const double v = spec.at(rr, xx);
    if (!std::isfinite(v)) throw SingularEvaluation("potential is not finite", rr);
    const double rx = rr * xx;
    return std::array<double, 2>{y[1], -rr * y[1] - rx * rx * v * y[0]};
  };
  std::vector<double> phi(n, 0.0);
  std::vector<double> q(m, 0.0);
  std::array<double, 2> y{1.0, x0 * (-a / l0)};
  phi[0] = y[0];
  q[0] = y[1];
  ode::Tolerance tol{opt.rtol, opt.atol};
  double h = 1e-3;
  double z = logit(r0);
  double zp = z;
  std::array<double, 2> yp = y;
  auto positive = [&](double zn, const std::array<double, 2>& yn) {
    if (yn[0] > 0.0) {
      zp = zn;
      yp = yn;
      return;
    }
    // Root of the cubic Hermite interpolant over the last step.
    const double dz = zn - zp;
    auto hermite = [&](double t) {
      const double t2 = t * t, t3 = t2 * t;
      return (2 * t3 - 3 * t2 + 1) * yp[0] + (t3 - 2 * t2 + t) * dz * yp[1] + (-2 * t3 + 3 * t2) * yn[0] +
             (t3 - t2) * dz * yn[1];
    };
    double lo = 0.0, hi = 1.0;
    for (int k = 0; k < 60; ++k) {
      const double mid = 0.5 * (lo + hi);
      (hermite(mid) > 0.0 ? lo : hi) = mid;
    }
    throw NodalSolution("solution reaches zero", sigmoid(zp + 0.5 * (lo + hi) * dz));
  };
  for (std::size_t i = 1; i < m; ++i) {
    const double z1 = logit(r[i]);
    y = ode::advance<2>(rhs, z, y, z1, h, tol, positive);
    z = z1;
    phi[i] = y[0];
    q[i] = y[1];
  }

  const double rl = r[m - 1];
  double end = phi[m - 1] + q[m - 1] / rl;
  if (q[m - 1] / phi[m - 1] <= -0.25) end = 0.0;
  if (end < -opt.delta) throw NodalSolution("solution changes sign before the boundary", 1.0);
  end = std::max(end, 0.0);
  phi[m] = end;

  const double top = *std::max_element(phi.begin(), phi.end());
  for (double& v : phi) v /= top;
  for (double& v : q) v /= top;

  GroundStateResult out{spec, RadialFunction(grid, std::move(phi), false)};
  out.dphi_dz = std::move(q);
  out.phi_at_1 = out.phi[m];
  try {
    out.kato = check_kato(spec, opt.kato_alpha).satisfied;
  } catch (const NumericalError&) {
    out.kato = false;
  }
  return out;
}

void transform_s(GroundStateResult& gs, const ShootOptions& opt) {
  const auto& r = gs.phi.grid().nodes();
  const std::size_t n = r.size();
  const std::size_t m = n - 1;
  if (m < 2) throw InvalidInput("transform needs at least 3 nodes");
  std::vector<double> z(m);
  std::vector<double> h(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double p = gs.phi[i];
    if (!(p > 0.0)) throw DomainError("transform requires a positive solution");
    z[i] = logit(r[i]);
    h[i] = (1.0 - r[i]) / (p * p);
  }
  const double ze = logit(std::exp(-1.0));
  if (ze < z.front() || ze > z.back()) throw DomainError("grid does not contain r = 1/e");
  CubicIntegral I(z, h);
  const double base = I.at(ze);

  gs.log_s.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) gs.log_s[i] = I.cumulative()[i] - base;

  const double zend = z.back();
  const double za = zend - 2.0 * kLn10;
  const double zb = zend - kLn10;
  double ratio = 0.0;
  double tail = 0.0;
  if (za >= z.front()) {
    const double inc1 = I.at(zb) - I.at(za);
    const double inc2 = I.cumulative().back() - I.at(zb);
    ratio = inc1 > 0.0 ? inc2 / inc1 : 0.0;
    if (ratio < opt.divergence_ratio) tail = inc2 * ratio / (1.0 - ratio);
  }
  gs.tail_ratio = ratio;
  gs.s_divergent = ratio >= opt.divergence_ratio;
  if (gs.s_divergent) {
    gs.log_s_at_1 = std::numeric_limits<double>::infinity();
    gs.s_at_1 = std::numeric_limits<double>::infinity();
  } else {
    gs.log_s_at_1 = gs.log_s[m - 1] + tail;
    gs.s_at_1 = std::exp(gs.log_s_at_1);
  }
  gs.log_s[m] = gs.log_s_at_1;

  kernels::Accumulator acc;
  std::size_t count = 0;
  for (std::size_t i = 0; i < m && r[i] <= 10.0 * r[0]; ++i, ++count)
    acc.add(std::exp(gs.log_s[i] - std::log(r[i])));
  gs.gamma = count > 0 ? acc.value() / static_cast<double>(count) : 0.0;
  gs.transformed = true;
  gs.classification = classify(gs, opt);
}

Coercivity classify(const GroundStateResult& gs, const ShootOptions& opt) {
  if (!gs.transformed) throw InvalidInput("classification requires the transform");
  if (gs.s_divergent) return Coercivity::GroundStateDetected;
  const auto& r = gs.phi.grid().nodes();
  const double rl = r[r.size() - 2];
  const double xl = 1.0 - rl;
  const double edge = xl * xl * gs.potential.at(rl, xl);
  if (gs.phi_at_1 <= opt.delta && edge < opt.regular_boundary) return Coercivity::GroundStateDetected;
  return Coercivity::WeaklyCoercive;
}

CoercivityReport classify_coercivity(const PotentialSpec& spec, GridPtr grid, const ShootOptions& opt) {
  CoercivityReport rep;
  try {
    auto gs = shoot(spec, std::move(grid), opt);
    transform_s(gs, opt);
    rep.verdict = gs.classification;
    rep.phi_at_1 = gs.phi_at_1;
    rep.s_divergent = gs.s_divergent;
    rep.log_s_at_1 = gs.log_s_at_1;
    rep.tail_ratio = gs.tail_ratio;
    rep.kato = gs.kato;
  } catch (const NodalSolution& e) {
    rep.verdict = Coercivity::Indefinite;
    rep.diagnostic = e.what();
  } catch (const StepFailure& e) {
    rep.verdict = Coercivity::Indefinite;
    rep.diagnostic = e.what();
  }
  return rep;
}

double jacobi_identity_residual(const GroundStateResult& gs, const RadialFunction& u) {
  const RadialFunction phi =
      u.grid().same_nodes(gs.phi.grid()) ? gs.phi.with_values(gs.phi.values()) : gs.phi.resample(u.grid_ptr());
  const auto& r = u.grid().nodes();
  const std::size_t n = r.size();
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (phi[i] > 0.0)
      w[i] = u[i] / phi[i];
    else if (i + 1 == n && u[i] == 0.0)
      w[i] = 0.0;
    else
      throw DomainError("Jacobi identity requires a positive solution");
  }
  const double q = gradient_norm_sq(u) - integral_weighted(u, [&](double rr) { return gs.potential.eval(rr); });
  const double t = kernels::ordered_sum(n - 1, [&](std::size_t i) {
    const double dr = r[i + 1] - r[i];
    const double pm = 0.5 * (phi[i] + phi[i + 1]);
    const double d = (w[i + 1] - w[i]) / dr;
    return pm * pm * d * d * 0.5 * (r[i] + r[i + 1]) * dr;
  });
  // Flux through the inner circle r = r0.
  const double rphi = u.grid().same_nodes(gs.phi.grid()) && !gs.dphi_dz.empty()
                          ? gs.dphi_dz[0] / (1.0 - r[0])
                          : r[0] * (phi[1] - phi[0]) / (r[1] - r[0]);
  const double flux = 2.0 * std::numbers::pi * phi[0] * rphi * w[0] * w[0];
  const double rhs = 2.0 * std::numbers::pi * t - flux;
  return std::fabs(q - rhs) / std::max(1.0, std::fabs(q));
}

double ode_residual(const PotentialSpec& spec, const std::function<double(double)>& phi, double r) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("ode residual evaluated outside (0, 1)");
  const double z = logit(r);
  const double hz = 1e-2;
  static constexpr double d1[4] = {0.0, 3.0 / 4, -3.0 / 20, 1.0 / 60};
  static constexpr double d2[4] = {-49.0 / 18, 3.0 / 2, -3.0 / 20, 1.0 / 90};
  const double f0 = phi(r);
  double fz = 0.0;
  double fzz = d2[0] * f0;
  for (int k = 1; k <= 3; ++k) {
    const double fp = phi(sigmoid(z + k * hz));
    const double fm = phi(sigmoid(z - k * hz));
    fz += d1[k] * (fp - fm);
    fzz += d2[k] * (fp + fm);
  }
  fz /= hz;
  fzz /= hz * hz;
  const double x = sigmoid_c(z);
  const double rr = sigmoid(z);
  const double lhs = -(fzz + rr * fz) / (rr * rr * x * x);
  const double vphi = spec.at(rr, x) * f0;
  return std::fabs(lhs - vphi) / std::max(1.0, std::fabs(vphi));
}

}  // namespace tmlab
