#include "tmlab/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "tmlab/errors.hpp"

namespace tmlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Piece of a radial profile on which it is linear; piece 0 is the core disk.
struct Segment {
  double a;
  double b;
  double va;
  double vb;
};

std::vector<Segment> segments_of(const RadialFunction& f) {
  const auto& r = f.grid().nodes();
  std::vector<Segment> s;
  s.reserve(r.size());
  s.push_back({0.0, r[0], f[0], f[0]});
  for (std::size_t i = 0; i + 1 < r.size(); ++i) s.push_back({r[i], r[i + 1], f[i], f[i + 1]});
  return s;
}

// Measure of {f > t} on one segment.
double measure_above(const Segment& s, double t, const MeasureProfile& mu) {
  const bool above_a = s.va > t;
  const bool above_b = s.vb > t;
  if (above_a && above_b) return mu.mass_between(s.a, s.b);
  if (!above_a && !above_b) return 0.0;
  const double c = std::clamp(s.a + (s.va - t) / (s.va - s.vb) * (s.b - s.a), s.a, s.b);
  return above_a ? mu.mass_between(s.a, c) : mu.mass_between(c, s.b);
}

void require_nonnegative(const RadialFunction& f) {
  for (double v : f.values()) {
    if (!std::isfinite(v)) throw InvalidInput("rearrangement input is not finite");
    if (v < 0.0) throw DomainError("rearrangement input must be nonnegative");
  }
}

double snap_tolerance(double node) {
  return std::max(1e-12 * std::min(node, 1.0 - node), 4.0 * std::numeric_limits<double>::epsilon() * node);
}

// Level sweep over the distinct nodal values, from the top down. Between
// consecutive levels only the segments crossing the band contribute partial
// measure; everything lying fully above is summed once.
class LevelSweep {
 public:
  LevelSweep(const RadialFunction& f, const MeasureProfile& mu) : mu_(mu), seg_(segments_of(f)) {
    levels_ = f.values();
    std::sort(levels_.begin(), levels_.end(), std::greater<>());
    levels_.erase(std::unique(levels_.begin(), levels_.end()), levels_.end());
    const std::size_t L = levels_.size();
    enter_.resize(L);
    full_.resize(L);
    flat_.resize(L);
    jmin_.resize(seg_.size());
    auto index_of = [&](double v) {
      return static_cast<std::size_t>(
          std::lower_bound(levels_.begin(), levels_.end(), v, std::greater<>()) - levels_.begin());
    };
    for (std::size_t k = 0; k < seg_.size(); ++k) {
      const double hi = std::max(seg_[k].va, seg_[k].vb);
      const double lo = std::min(seg_[k].va, seg_[k].vb);
      const std::size_t jmax = index_of(hi);
      const std::size_t jmin = index_of(lo);
      jmin_[k] = jmin;
      full_[jmin].push_back(k);
      if (jmax == jmin)
        flat_[jmin].push_back(k);
      else
        enter_[jmax].push_back(k);
    }
  }

  std::size_t level_count() const noexcept { return levels_.size(); }
  double level(std::size_t j) const noexcept { return levels_[j]; }

  /// mu{f > T_j}; valid while the sweep sits just above level j.
  double strict_at(std::size_t j) const {
    kernels::Accumulator acc;
    acc.add(full_sum_.value());
    for (std::size_t k : crossing_) acc.add(measure_above(seg_[k], levels_[j], mu_));
    return acc.value();
  }
  /// mu{f >= T_j} given mu{f > T_j}.
  double closed_at(std::size_t j, double strict) const {
    kernels::Accumulator acc;
    acc.add(strict);
    for (std::size_t k : flat_[j]) acc.add(mu_.mass_between(seg_[k].a, seg_[k].b));
    return acc.value();
  }
  /// mu{f > t} for t strictly inside the current band.
  double inside(double t) const {
    kernels::Accumulator acc;
    acc.add(full_sum_.value());
    for (std::size_t k : crossing_) acc.add(measure_above(seg_[k], t, mu_));
    return acc.value();
  }
  /// mu{f > t} for nonincreasing t across calls; j tracks the sweep position.
  double descend_to(std::size_t& j, double t) {
    while (j < levels_.size() && levels_[j] > t) pass(j++);
    if (j < levels_.size() && levels_[j] == t) return strict_at(j);
    return inside(t);
  }
  /// Moves from just above level j to the band just below it.
  void pass(std::size_t j) {
    for (std::size_t k : full_[j]) full_sum_.add(mu_.mass_between(seg_[k].a, seg_[k].b));
    std::erase_if(crossing_, [&](std::size_t k) { return jmin_[k] == j; });
    crossing_.insert(crossing_.end(), enter_[j].begin(), enter_[j].end());
  }

 private:
  const MeasureProfile& mu_;
  std::vector<Segment> seg_;
  std::vector<double> levels_;
  std::vector<std::vector<std::size_t>> enter_;
  std::vector<std::vector<std::size_t>> full_;
  std::vector<std::vector<std::size_t>> flat_;
  std::vector<std::size_t> jmin_;
  std::vector<std::size_t> crossing_;
  kernels::Accumulator full_sum_;
};

double snap(double rho, const std::vector<double>& nodes) {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), rho);
  double best = rho;
  double gap = kInf;
  for (auto c : {it, it == nodes.begin() ? it : it - 1}) {
    if (c == nodes.end()) continue;
    const double d = std::fabs(*c - rho);
    if (d <= snap_tolerance(*c) && d < gap) {
      gap = d;
      best = *c;
    }
  }
  return best;
}

}  // namespace

double MeasureProfile::density(double r, double x) const noexcept {
  if (kind_ == Kind::euclidean) return 2.0 * kPi * r;
  const double q = x * (1.0 + r);
  return 8.0 * kPi * r / (q * q);
}

double MeasureProfile::mass(double r) const noexcept {
  if (kind_ == Kind::euclidean) return kPi * r * r;
  if (r >= 1.0) return kInf;
  return 4.0 * kPi * r * r / ((1.0 - r) * (1.0 + r));
}

double MeasureProfile::mass_between(double a, double b) const noexcept {
  if (kind_ == Kind::euclidean) return kPi * (b - a) * (b + a);
  if (b >= 1.0) return a >= 1.0 ? 0.0 : kInf;
  return 4.0 * kPi * (b - a) * (b + a) / ((1.0 - a) * (1.0 + a) * (1.0 - b) * (1.0 + b));
}

double MeasureProfile::radius(double m) const noexcept {
  if (!(m > 0.0)) return 0.0;
  if (kind_ == Kind::euclidean) return std::min(1.0, std::sqrt(m / kPi));
  if (std::isinf(m)) return 1.0;
  return std::sqrt(m / (4.0 * kPi + m));
}

double MeasureProfile::total() const noexcept { return kind_ == Kind::euclidean ? kPi : kInf; }

double distribution(const RadialFunction& f, double t, const MeasureProfile& mu, Exec exec) {
  const auto seg = segments_of(f);
  return kernels::ordered_sum(
      seg.size(), [&](std::size_t k) { return measure_above(seg[k], t, mu); }, exec);
}

RadialFunction rearrange_decreasing(const RadialFunction& f, const MeasureProfile& mu) {
  require_nonnegative(f);
  const auto& nodes = f.grid().nodes();

  LevelSweep sweep(f, mu);
  const std::size_t L = sweep.level_count();
  std::vector<double> rho_strict(L);
  std::vector<double> rho_closed(L);
  for (std::size_t j = 0; j < L; ++j) {
    const double s = sweep.strict_at(j);
    const double c = sweep.closed_at(j, s);
    rho_strict[j] = snap(mu.radius(s), nodes);
    rho_closed[j] = j + 1 == L ? 1.0 : snap(mu.radius(c), nodes);
    sweep.pass(j);
  }

  std::vector<double> out_nodes(nodes);
  for (std::size_t j = 0; j < L; ++j) {
    for (double rho : {rho_strict[j], rho_closed[j]}) {
      if (rho > nodes.front() && rho < 1.0) out_nodes.push_back(rho);
    }
  }
  std::sort(out_nodes.begin(), out_nodes.end());
  std::vector<double> merged;
  merged.reserve(out_nodes.size());
  for (double r : out_nodes) {
    if (merged.empty() || r - merged.back() > snap_tolerance(merged.back())) merged.push_back(r);
  }
  merged.back() = 1.0;
  auto grid = RadialGrid::from_nodes(merged);

  LevelSweep eval(f, mu);
  std::vector<double> values(merged.size(), sweep.level(L - 1));
  std::size_t k = 0;
  for (std::size_t j = 0; j < L && k < merged.size(); ++j) {
    while (k < merged.size() && merged[k] <= rho_closed[j]) {
      const double r = merged[k];
      if (r >= rho_strict[j] || j == 0) {
        values[k] = eval.level(j);
      } else {
        const double target = mu.mass(r);
        double lo = eval.level(j);
        double hi = eval.level(j - 1);
        for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
          const double mid = 0.5 * (lo + hi);
          if (eval.inside(mid) > target)
            lo = mid;
          else
            hi = mid;
        }
        values[k] = 0.5 * (lo + hi);
      }
      ++k;
    }
    eval.pass(j);
  }
  return RadialFunction(grid, std::move(values), f.dirichlet());
}

double check_equimeasurable(const RadialFunction& f, const RadialFunction& g, const MeasureProfile& mu,
                            std::size_t levels) {
  require_nonnegative(f);
  require_nonnegative(g);
  if (levels == 0) throw InvalidInput("check_equimeasurable needs at least one level");
  const auto [fmin, fmax] = std::minmax_element(f.values().begin(), f.values().end());
  const auto [gmin, gmax] = std::minmax_element(g.values().begin(), g.values().end());
  const double lo = std::min(*fmin, *gmin);
  const double hi = std::max(*fmax, *gmax);
  if (hi == lo) return 0.0;
  LevelSweep fs(f, mu);
  LevelSweep gs(g, mu);
  std::size_t jf = 0;
  std::size_t jg = 0;
  double worst = 0.0;
  for (std::size_t i = levels; i-- > 0;) {
    const double t = lo + (static_cast<double>(i) + 0.5) / static_cast<double>(levels) * (hi - lo);
    const double a = fs.descend_to(jf, t);
    const double b = gs.descend_to(jg, t);
    if (std::isinf(a) && std::isinf(b)) continue;
    if (std::isinf(a) || std::isinf(b)) return 1.0;
    worst = std::max(worst, std::fabs(a - b) / std::max({1.0, a, b}));
  }
  return worst;
}

double integral_mu(const RadialFunction& f, const std::function<double(double)>& F, const MeasureProfile& mu,
                   Exec exec) {
  const auto& r = f.grid().nodes();
  const double cells = kernels::ordered_sum(
      f.grid().cells(),
      [&](std::size_t i) {
        const double h = r[i + 1] - r[i];
        const double xa = 1.0 - r[i];
        double s = 0.0;
        for (int g = 0; g < 2; ++g) {
          const double t = quad::kGaussT[g];
          s += quad::kGaussW[g] * F(f.on_cell(i, t)) * mu.density(r[i] + t * h, xa - t * h);
        }
        return s * h;
      },
      exec);
  return mu.mass(r[0]) * F(f[0]) + cells;
}

GridPtr merge_grids(const RadialGrid& a, const RadialGrid& b) {
  if (&a == &b || a.same_nodes(b)) return RadialGrid::from_nodes(a.nodes());
  std::vector<double> n;
  n.reserve(a.size() + b.size());
  std::merge(a.nodes().begin(), a.nodes().end(), b.nodes().begin(), b.nodes().end(), std::back_inserter(n));
  n.erase(std::unique(n.begin(), n.end()), n.end());
  return RadialGrid::from_nodes(std::move(n));
}

double integral_mu_product(const RadialFunction& f, const RadialFunction& g, const MeasureProfile& mu,
                           Exec exec) {
  const bool same = f.grid_ptr() == g.grid_ptr() || f.grid().same_nodes(g.grid());
  const RadialFunction fm = same ? f : f.resample(merge_grids(f.grid(), g.grid()));
  const RadialFunction gm = same ? g : g.resample(fm.grid_ptr());
  const auto& r = fm.grid().nodes();
  const double cells = kernels::ordered_sum(
      fm.grid().cells(),
      [&](std::size_t i) {
        const double h = r[i + 1] - r[i];
        const double xa = 1.0 - r[i];
        double s = 0.0;
        for (int q = 0; q < 2; ++q) {
          const double t = quad::kGaussT[q];
          s += quad::kGaussW[q] * fm.on_cell(i, t) * gm.on_cell(i, t) * mu.density(r[i] + t * h, xa - t * h);
        }
        return s * h;
      },
      exec);
  return mu.mass(r[0]) * fm[0] * gm[0] + cells;
}

double hardy_littlewood_gap(const RadialFunction& f, const RadialFunction& g, const MeasureProfile& mu) {
  const auto fs = rearrange_decreasing(f, mu);
  const auto gs = rearrange_decreasing(g, mu);
  return integral_mu_product(fs, gs, mu) - integral_mu_product(f, g, mu);
}

double polya_szego_gap(const RadialFunction& f) {
  const auto fs = rearrange_decreasing(f, MeasureProfile::hyperbolic());
  return gradient_norm_sq(f) - gradient_norm_sq(fs);
}

}  // namespace tmlab
