#include <cmath>
#include <numbers>

#include "doctest.h"
#include "tmlab/errors.hpp"
#include "tmlab/potentials.hpp"
#include "tmlab/radial.hpp"
#include "tmlab/rearrange.hpp"

using namespace tmlab;

TEST_CASE("potential values at 1/e") {
  const double r = std::exp(-1.0);
  const double e2 = std::exp(2.0) / 4.0;
  CHECK(PotentialSpec::leray().eval(r) == doctest::Approx(e2).epsilon(1e-14));
  CHECK(PotentialSpec::gamma(0.5).eval(r) == doctest::Approx(e2).epsilon(1e-14));
  CHECK(PotentialSpec::gamma(2.0).eval(r) == doctest::Approx(e2).epsilon(1e-14));
  for (double x : {0.1, 0.5, 0.9}) CHECK(PotentialSpec::constant(3.5).eval(x) == 3.5);
  CHECK(PotentialSpec::wangye().eval(0.5) == doctest::Approx(1.0 / (0.75 * 0.75)));
}

TEST_CASE("evaluation outside the open interval is a domain error") {
  for (double r : {0.0, 1.0, -0.5, 1.5}) CHECK_THROWS_AS(PotentialSpec::leray().eval(r), DomainError);
}

TEST_CASE("spec strings round trip") {
  for (const char* s : {"constant:2", "leray", "gamma:0.5", "wangye"})
    CHECK(PotentialSpec::parse(s).describe() == s);
  CHECK_THROWS_AS(PotentialSpec::parse("banana"), InvalidInput);
  CHECK_THROWS_AS(PotentialSpec::parse("constant:x"), InvalidInput);
  CHECK_THROWS_AS(PotentialSpec::parse("tabulated:/nonexistent.csv"), InvalidInput);
}

TEST_CASE("class V membership") {
  const GridPtr g = RadialGrid::graded(4096);
  CHECK(check_class_V(PotentialSpec::constant(2.0), *g).member);
  CHECK(check_class_V(PotentialSpec::wangye(), *g).member);
  for (double gamma : {0.25, 0.5}) CHECK(check_class_V(PotentialSpec::gamma(gamma), *g).member);
  // With L = log(1/r) > 1, g = (sinh L / L)^2 L^-gamma, so d log g / dL = 2 (coth L - 1/L) - gamma / L.
  // This is negative just above L = 1 once gamma > 2 (coth 1 - 1).
  const double threshold = 2.0 * (std::cosh(1.0) / std::sinh(1.0) - 1.0);
  CHECK(check_class_V(PotentialSpec::gamma(0.99 * threshold), *g).member);
  const ClassVCheck bad = check_class_V(PotentialSpec::gamma(1.0), *g);
  CHECK_FALSE(bad.member);
  CHECK(bad.r_right <= std::exp(-1.0));
  CHECK(bad.r_left >= std::exp(-1.287) * 0.99);
  // g(r) = (1 - r^2)^2 V grows toward the boundary.
  std::vector<double> radii, values;
  for (int i = 1; i < 100; ++i) {
    const double r = i / 100.0;
    radii.push_back(r);
    values.push_back(1.0 / std::pow(1.0 - r * r, 3.0));
  }
  const ClassVCheck c = check_class_V(PotentialSpec::tabulated(radii, values), *g);
  CHECK_FALSE(c.member);
  CHECK(c.g_right > c.g_left);
  CHECK(c.r_right > c.r_left);
}

TEST_CASE("Kato-type decay") {
  const KatoCheck gamma = check_kato(PotentialSpec::gamma(0.5), 0.25);
  CHECK(gamma.satisfied);
  // h = (log 1/r)^(alpha - gamma) / 4 exactly.
  for (std::size_t i = 0; i < gamma.radii.size(); ++i)
    CHECK(gamma.h[i] == doctest::Approx(std::pow(std::log(1.0 / gamma.radii[i]), -0.25) / 4.0).epsilon(1e-12));
  CHECK_FALSE(check_kato(PotentialSpec::leray(), 0.25).satisfied);
  CHECK_FALSE(check_kato(PotentialSpec::leray(), 1.0).satisfied);
  CHECK(check_kato(PotentialSpec::constant(3.0), 1.0).satisfied);
}

TEST_CASE("pointwise comparisons between the catalogue potentials") {
  const GridPtr g = RadialGrid::graded(4096);
  const auto& r = g->nodes();
  const PotentialSpec wy = PotentialSpec::wangye();
  const PotentialSpec g5 = PotentialSpec::gamma(0.5);
  const PotentialSpec leray = PotentialSpec::leray();
  for (std::size_t i = 0; i + 1 < r.size(); ++i) {
    // The ratio tends to 1 at the boundary, so allow rounding.
    CHECK(wy.eval(r[i]) <= g5.eval(r[i]) * (1.0 + 1e-12));
    if (std::log(1.0 / r[i]) >= 1.0) {
      CHECK(g5.eval(r[i]) <= leray.eval(r[i]));
      if (r[i] < std::exp(-1.0) * (1.0 - 1e-12)) CHECK(g5.eval(r[i]) < leray.eval(r[i]));
    }
  }
}

TEST_CASE("rearranged potential") {
  std::vector<double> radii, flat, mono;
  for (int i = 1; i <= 200; ++i) {
    const double r = i / 201.0;
    radii.push_back(r);
    flat.push_back(2.5);
    mono.push_back(1.0 / (1.0 - r * r));
  }
  const PotentialSpec c = rearranged_potential({radii, flat, "flat"}, 1.0);
  for (double r : {0.01, 0.3, 0.7, 0.95}) CHECK(c.eval(r) == doctest::Approx(2.5).epsilon(1e-12));

  // g = (1 - r^2) is already nonincreasing.
  const PotentialSpec m = rearranged_potential({radii, mono, "mono"}, 1.0);
  for (std::size_t i = 0; i < radii.size(); i += 17) CHECK(m.eval(radii[i]) == doctest::Approx(mono[i]).epsilon(1e-10));

  // Idempotent on its own output.
  std::vector<double> incr;
  for (double r : radii) incr.push_back(r * r / std::pow(1.0 - r * r, 2.0));
  const PotentialSpec once = rearranged_potential({radii, incr, "incr"}, 1.0);
  std::vector<double> again;
  for (double r : radii) again.push_back(once.eval(r));
  const PotentialSpec twice = rearranged_potential({radii, again, "again"}, 1.0);
  for (std::size_t i = 0; i < radii.size(); i += 13) CHECK(twice.eval(radii[i]) == doctest::Approx(once.eval(radii[i])).epsilon(1e-10));
  // The rearranged weight (1 - r^2)^2 V is nonincreasing.
  double prev = std::numeric_limits<double>::infinity();
  for (double r : radii) {
    const double gval = std::pow(1.0 - r * r, 2.0) * once.eval(r);
    CHECK(gval <= prev * (1.0 + 1e-12));
    prev = gval;
  }
}

TEST_CASE("rescaling to a smaller disk") {
  std::vector<double> radii, values;
  for (int i = 1; i <= 100; ++i) {
    radii.push_back(0.5 * i / 101.0);
    values.push_back(3.0);
  }
  const PotentialSpec v = rearranged_potential({radii, values, "c"}, 0.5);
  CHECK(v.eval(0.4) == doctest::Approx(0.75).epsilon(1e-12));
}
