#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "tmlab/forms.hpp"
#include "tmlab/groundstate.hpp"
#include "tmlab/radial.hpp"

namespace tmlab {

/// m_k(r) = (2 pi)^(-1/2) min(sqrt(log k), log(1/r) / sqrt(log k)), k >= 2.
RadialFunction moser_family(GridPtr grid, double k);

/// Cutoff in the s variable: (1/k) min(log k, log(k^2 / s)) below k^2, zero beyond.
/// Continuous, with planar Dirichlet energy 2 pi log(k) / k^2.
class WkCutoff {
 public:
  explicit WkCutoff(double k);
  double k() const noexcept { return k_; }
  double operator()(double s) const;
  /// Same value from log s, so s may exceed the double range.
  double from_log(double log_s) const;
  double energy() const;

 private:
  double k_;
  double log_k_;
};

/// The planar cutoff moved to the unit disk: r -> w_k(k^2 r).
RadialFunction wk_profile(GridPtr grid, double k);

/// phi(r) w_k(s(r)). Throws ParameterError when k^2 exceeds the s range of the grid.
RadialFunction ground_state_approx(const GroundStateResult& gs, double k);

/// Largest k whose cutoff fits inside the s range of a transformed result.
double ground_state_k_max(const GroundStateResult& gs);

class TrialFamily {
 public:
  enum class Kind { Moser, WkCutoff, GroundStateApprox };

  static TrialFamily moser(GridPtr grid);
  static TrialFamily wk(GridPtr grid);
  static TrialFamily gsapprox(std::shared_ptr<const GroundStateResult> gs);

  Kind kind() const noexcept { return kind_; }
  std::string name() const;
  const GridPtr& grid() const noexcept { return grid_; }
  RadialFunction generate(double k) const;
  /// 2^1 ... 2^14 for Moser and WkCutoff; 16 log-spaced values up to the s range otherwise.
  std::vector<double> default_k() const;
  /// False when k is capped by a finite s(1), so the family cannot concentrate.
  bool unbounded() const noexcept;

 private:
  TrialFamily(Kind k, GridPtr g, std::shared_ptr<const GroundStateResult> gs)
      : kind_(k), grid_(std::move(g)), gs_(std::move(gs)) {}
  Kind kind_;
  GridPtr grid_;
  std::shared_ptr<const GroundStateResult> gs_;
};

enum class Verdict { Bounded, Divergent, Inconclusive };
std::string to_string(Verdict v);

struct ProbeRow {
  double k = 0.0;
  double Q = 0.0;             ///< Q(u_k)
  double J = 0.0;             ///< J(u_k / sqrt(Q)), +inf on overflow
  double log_J = 0.0;
  bool overflow = false;
  bool nonpositive = false;   ///< Q(u_k) <= 0
  double Q_normalized = 0.0;  ///< Q(u_k / sqrt(Q)), close to 1
  std::string error;          ///< generation failure for this k
};

struct GrowthFit {
  std::string model = "none";  ///< constant, power or exponential
  double amplitude = 0.0;
  double rate = 0.0;
  double rss_constant = 0.0;
  double rss_power = 0.0;
  double rss_exponential = 0.0;
  double power_rate = 0.0;
  double exponential_rate = 0.0;
  std::size_t points = 0;
};

struct ProbeReport {
  std::string family;
  std::string form;
  double exponent = 0.0;
  /// The family parameter is capped; its supremum over the rows is the whole family.
  bool finite_range = false;
  std::vector<ProbeRow> rows;
  GrowthFit fit;
  Verdict verdict = Verdict::Inconclusive;
  std::string reason;
};

struct ProbeOptions {
  double exponent = 4.0 * 3.14159265358979323846;
  /// Rows used by the growth fit.
  std::size_t window = 8;
  /// A growth model must beat the constant model's residual by this factor.
  double rss_ratio = 0.5;
  /// Trailing increments that must all be positive for divergence.
  std::size_t min_increasing = 5;
  Exec exec = Exec::parallel;
};

/// Evaluates J(u_k / sqrt(Q(u_k))) across k and classifies the growth.
ProbeReport probe_supremum(const FormSpec& form, const TrialFamily& family, const std::vector<double>& k_list,
                           const ProbeOptions& opt = {});

/// Fits log J against the constant, power and exponential models and applies the verdict rules.
void classify_growth(ProbeReport& report, const ProbeOptions& opt);

struct AscentOptions {
  std::size_t budget = 200;
  std::uint64_t seed = 1;
  /// Random monotone starts added to the family seeds.
  std::size_t random_starts = 4;
  /// J beyond this counts as evidence that the supremum is infinite.
  double divergence_threshold = 1e6 * 3.14159265358979323846;
  double exponent = 4.0 * 3.14159265358979323846;
  Exec exec = Exec::parallel;
};

struct AscentResult {
  double best_J = 0.0;
  double log_best_J = 0.0;
  RadialFunction profile;
  bool divergent_evidence = false;
  std::string reason;
  std::size_t iterations = 0;
  std::size_t starts = 0;
};

/// Projected ascent of J over nonincreasing Dirichlet profiles with Q <= 1.
/// The result is a lower bound for the supremum.
AscentResult maximize_J_constrained(const FormSpec& form, GridPtr grid, const AscentOptions& opt = {});

struct LambdaEstimate {
  double value = 0.0;
  RadialFunction eigenfunction;  ///< positive, max 1
  std::size_t iterations = 0;
  /// Spread of the local minima over multistarts (zero for lambda_1).
  double spread_min = 0.0;
  double spread_max = 0.0;
};

/// Smallest Dirichlet eigenvalue of the radial Laplacian by inverse iteration
/// on linear finite elements.
LambdaEstimate estimate_lambda_1(GridPtr grid);

/// Upper bound for inf ||grad u||^2 over ||u||_p = 1 by nonlinear inverse
/// iteration from seeded bump starts.
LambdaEstimate estimate_lambda_p(double p, GridPtr grid, std::size_t starts = 32, std::uint64_t seed = 1);

}  // namespace tmlab
