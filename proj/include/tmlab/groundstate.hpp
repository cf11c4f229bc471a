#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tmlab/potentials.hpp"
#include "tmlab/radial.hpp"

namespace tmlab {

enum class Coercivity { WeaklyCoercive, GroundStateDetected, Indefinite };

std::string to_string(Coercivity c);

struct ShootOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  /// phi(1) at or below this counts as zero.
  double delta = 1e-6;
  /// Ratio of the last two decade increments of log s at or above which s(1) diverges.
  double divergence_ratio = 0.95;
  /// Boundary counts as regular when x^2 V(r) at the last interior node is below this.
  double regular_boundary = 1e-3;
  /// Exponent used for the advisory Kato tag.
  double kato_alpha = 0.25;
};

/// Positive radial solution of -(1/r)(r phi')' = V phi and its transform s(r).
struct GroundStateResult {
  PotentialSpec potential;
  /// Normalized so max phi = 1; the last node carries phi(1).
  RadialFunction phi;
  /// d phi / dz with z = logit(r), at the interior nodes.
  std::vector<double> dphi_dz{};
  double phi_at_1 = 0.0;

  bool transformed = false;
  /// log s at every node; the last entry is log s(1), +inf when divergent.
  std::vector<double> log_s{};
  bool s_divergent = false;
  double s_at_1 = 0.0;
  double log_s_at_1 = 0.0;
  /// Increment ratio of log s over the last two decades of 1 - r.
  double tail_ratio = 0.0;
  /// Mean of s(r)/r over the innermost decade of nodes.
  double gamma = 0.0;

  Coercivity classification = Coercivity::Indefinite;
  bool kato = false;

  /// s at the nodes (may overflow to +inf).
  RadialFunction s_table() const;
};

/// Integrates the radial equation in z = logit(r) from nodes[0]. The start value
/// follows the principal (slowest-growing) solution of the Euler equation fitted
/// to V at nodes[0], which is flat for potentials weaker than the Leray weight.
/// Throws NodalSolution if phi reaches zero and StepFailure if the integrator stalls.
GroundStateResult shoot(const PotentialSpec& spec, GridPtr grid, const ShootOptions& opt = {});

/// Fills log s from d log s / dz = (1 - r) / phi^2 with s(1/e) = 1, decides whether
/// s(1) is finite, and fits gamma.
void transform_s(GroundStateResult& gs, const ShootOptions& opt = {});

/// |Q_V(u) - 2 pi int phi^2 ((u/phi)')^2 r dr| / max(1, |Q_V(u)|).
double jacobi_identity_residual(const GroundStateResult& gs, const RadialFunction& u);

struct CoercivityReport {
  Coercivity verdict = Coercivity::Indefinite;
  double phi_at_1 = 0.0;
  bool s_divergent = false;
  double log_s_at_1 = 0.0;
  double tail_ratio = 0.0;
  bool kato = false;
  std::string diagnostic;
};

/// Shoot, transform and classify; shooting failures map to Indefinite.
CoercivityReport classify_coercivity(const PotentialSpec& spec, GridPtr grid, const ShootOptions& opt = {});
/// Classification from a transformed result.
Coercivity classify(const GroundStateResult& gs, const ShootOptions& opt = {});

/// Relative residual |-(1/r)(r phi')' - V phi| / max(1, |V phi|) at r, with
/// derivatives of phi taken by sixth-order differences in logit(r).
double ode_residual(const PotentialSpec& spec, const std::function<double(double)>& phi, double r);

}  // namespace tmlab
