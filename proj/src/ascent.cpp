#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>

#include "tmlab/errors.hpp"
#include "tmlab/pava.hpp"
#include "tmlab/probe.hpp"
#include "tmlab/sampling.hpp"

namespace tmlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Q(u) with the potential weights cached at the cell midpoints.
class QuadraticForm {
 public:
  QuadraticForm(const FormSpec& form, const GridPtr& grid) : form_(form) {
    if (const PotentialSpec* V = form.potential_spec(); V != nullptr && !V->is_zero()) {
      const auto& r = grid->nodes();
      weights_.resize(grid->cells());
      for (std::size_t i = 0; i < weights_.size(); ++i) {
        const double rm = 0.5 * (r[i] + r[i + 1]);
        const double v = V->eval(rm);
        if (!std::isfinite(v)) throw SingularEvaluation("potential is not finite", rm);
        weights_[i] = kTwoPi * v * rm * (r[i + 1] - r[i]);
      }
    }
  }

  double operator()(const RadialFunction& u) const {
    if (weights_.empty()) return eval_Q(form_, u, Exec::serial);
    kernels::Accumulator acc;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      const double um = 0.5 * (u[i] + u[i + 1]);
      acc.add(weights_[i] * um * um);
    }
    return gradient_norm_sq(u, Exec::serial) - acc.value();
  }

 private:
  const FormSpec& form_;
  std::vector<double> weights_;
};

struct Start {
  double log_J = -std::numeric_limits<double>::infinity();
  std::vector<double> u;
  bool evidence = false;
  std::string reason;
  std::size_t iterations = 0;
};

class Ascent {
 public:
  Ascent(const FormSpec& form, GridPtr grid, const AscentOptions& opt)
      : grid_(std::move(grid)), q_(form, grid_), opt_(opt) {
    const auto& r = grid_->nodes();
    const std::size_t n = r.size();
    pava_w_.assign(n, 0.0);
    pava_w_[0] = 0.5 * r[0] * r[0];
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double h = r[i + 1] - r[i];
      pava_w_[i] += 0.5 * h * r[i];
      pava_w_[i + 1] += 0.5 * h * r[i + 1];
    }
  }

  Start run(std::vector<double> u) const {
    Start s;
    if (!project(u, s)) return s;
    s.log_J = log_J(u);
    s.u = u;
    if (check_evidence(s)) return s;
    double step = 0.1;
    for (std::size_t it = 0; it < opt_.budget && step > 1e-10; ++it) {
      ++s.iterations;
      std::vector<double> v = s.u;
      const std::vector<double> g = gradient(v);
      const double gmax = std::max(1e-300, *std::max_element(g.begin(), g.end(), [](double a, double b) {
        return std::fabs(a) < std::fabs(b);
      }));
      const double umax = *std::max_element(v.begin(), v.end());
      const double scale = step * umax / std::fabs(gmax);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] += scale * g[i];
      Start trial;
      if (!project(v, trial)) {
        s = std::move(trial);
        return s;
      }
      const double lj = log_J(v);
      if (lj > s.log_J) {
        s.u = std::move(v);
        s.log_J = lj;
        if (check_evidence(s)) return s;
        step = std::min(1.0, 1.5 * step);
      } else {
        step *= 0.5;
      }
    }
    return s;
  }

 private:
  RadialFunction fn(std::vector<double> u) const { return RadialFunction(grid_, std::move(u), true); }

  double log_J(const std::vector<double>& u) const {
    return eval_J(fn(u), opt_.exponent, Exec::serial).log_value;
  }

  // Monotone cone, nonnegativity, boundary value, then Q = 1.
  bool project(std::vector<double>& u, Start& s) const {
    u = pava_nonincreasing(u, pava_w_);
    for (double& x : u) x = std::max(x, 0.0);
    u.back() = 0.0;
    const double q = q_(fn(u));
    if (!(q > 0.0)) {
      if (*std::max_element(u.begin(), u.end()) == 0.0) return false;
      s.u = u;
      s.evidence = true;
      s.reason = "Q <= 0 on a nonzero profile";
      s.log_J = std::numeric_limits<double>::infinity();
      return false;
    }
    const double c = 1.0 / std::sqrt(q);
    for (double& x : u) x *= c;
    return true;
  }

  bool check_evidence(Start& s) const {
    const double top = opt_.exponent * s.u.front() * s.u.front();
    if (top > 700.0) {
      s.evidence = true;
      s.reason = "J overflows";
    } else if (s.log_J > std::log(opt_.divergence_threshold)) {
      s.evidence = true;
      s.reason = "J exceeds the divergence threshold";
    }
    return s.evidence;
  }

  // Gradient of J in node values, scaled by exp(-c max u^2).
  std::vector<double> gradient(const std::vector<double>& u) const {
    const auto& r = grid_->nodes();
    const double c = opt_.exponent;
    const double top = c * u.front() * u.front();
    std::vector<double> g(u.size(), 0.0);
    g[0] += 0.5 * r[0] * r[0] * std::exp(c * u[0] * u[0] - top) * 2.0 * c * u[0];
    for (std::size_t i = 0; i + 1 < u.size(); ++i) {
      const double h = r[i + 1] - r[i];
      for (int q = 0; q < 2; ++q) {
        const double t = quad::kGaussT[q];
        const double x = u[i] + t * (u[i + 1] - u[i]);
        const double f = quad::kGaussW[q] * h * (r[i] + t * h) * std::exp(c * x * x - top) * 2.0 * c * x;
        g[i] += f * (1.0 - t);
        g[i + 1] += f * t;
      }
    }
    g.back() = 0.0;
    return g;
  }

  GridPtr grid_;
  QuadraticForm q_;
  AscentOptions opt_;
  std::vector<double> pava_w_;
};

}  // namespace

AscentResult maximize_J_constrained(const FormSpec& form, GridPtr grid, const AscentOptions& opt) {
  if (opt.budget == 0) throw InvalidInput("ascent budget must be at least 1");
  std::vector<std::vector<double>> seeds;
  for (int e = 1; e <= 14; ++e) {
    try {
      seeds.push_back(moser_family(grid, std::ldexp(1.0, e)).values());
    } catch (const ParameterError&) {
    }
  }
  if (const PotentialSpec* V = form.potential_spec()) {
    try {
      auto gs = std::make_shared<GroundStateResult>(shoot(*V, grid));
      transform_s(*gs);
      const TrialFamily fam = TrialFamily::gsapprox(gs);
      for (double k : fam.default_k()) seeds.push_back(fam.generate(k).values());
    } catch (const NumericalError&) {
    }
  }
  for (std::size_t i = 0; i < opt.random_starts; ++i) {
    Rng rng = Rng::stream(opt.seed, i);
    seeds.push_back(sample_monotone(grid, rng).values());
  }

  const Ascent ascent(form, grid, opt);
  std::vector<Start> runs(seeds.size());
  kernels::parallel_for(seeds.size(), [&](std::size_t i) { runs[i] = ascent.run(seeds[i]); }, opt.exec);

  std::size_t best = runs.size();
  std::size_t iterations = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    iterations += runs[i].iterations;
    if (runs[i].u.empty()) continue;
    if (best == runs.size() || runs[i].log_J > runs[best].log_J) best = i;
  }
  if (best == runs.size()) throw NumericalError("ascent found no admissible start");
  const Start& b = runs[best];
  RadialFunction witness(grid, b.u, true);
  const JValue j = eval_J(witness, opt.exponent);
  AscentResult out{j.value, j.log_value, witness, false, "", iterations, runs.size()};
  for (const Start& s : runs) {
    if (s.evidence) {
      out.divergent_evidence = true;
      out.reason = s.reason;
      break;
    }
  }
  if (b.evidence && std::isinf(b.log_J)) {
    out.best_J = std::numeric_limits<double>::infinity();
    out.log_best_J = std::numeric_limits<double>::infinity();
  }
  return out;
}

}  // namespace tmlab
