#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "tmlab/forms.hpp"
#include "tmlab/kernels.hpp"
#include "tmlab/rearrange.hpp"
#include "tmlab/sampling.hpp"

using namespace tmlab;
using kernels::Exec;

TEST_CASE("accumulator compensates cancellation") {
  kernels::Accumulator acc;
  acc.add(1.0);
  acc.add(1e100);
  acc.add(1.0);
  acc.add(-1e100);
  CHECK(acc.value() == 2.0);
}

TEST_CASE("accumulator keeps infinities") {
  kernels::Accumulator acc;
  acc.add(1.0);
  acc.add(std::numeric_limits<double>::infinity());
  acc.add(2.0);
  CHECK(std::isinf(acc.value()));
  CHECK(acc.value() > 0.0);
}

TEST_CASE("ordered_sum is independent of the execution path") {
  const std::size_t n = 100000;
  auto term = [](std::size_t i) { return std::sin(0.001 * static_cast<double>(i)) / (1.0 + i); };
  CHECK(kernels::ordered_sum(n, term, Exec::serial) == kernels::ordered_sum(n, term, Exec::parallel));
}

TEST_CASE("parallel_for reports the lowest failing index") {
  auto body = [](std::size_t i) {
    if (i % 97 == 13) throw std::runtime_error("fail " + std::to_string(i));
  };
  try {
    kernels::parallel_for(10000, body, Exec::parallel);
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "fail 13");
  }
}

TEST_CASE("grid kernels agree bitwise between serial and parallel") {
  const GridPtr grid = RadialGrid::graded(4096);
  for (std::uint64_t s = 0; s < 5; ++s) {
    Rng rng = Rng::stream(3, s);
    const RadialFunction u = sample_bumps(grid, rng);
    CHECK(gradient_norm_sq(u, Exec::serial) == gradient_norm_sq(u, Exec::parallel));
    CHECK(lp_norm(u, 3.0, Exec::serial) == lp_norm(u, 3.0, Exec::parallel));
    CHECK(eval_J(u, 4.0 * std::numbers::pi, Exec::serial).log_value ==
          eval_J(u, 4.0 * std::numbers::pi, Exec::parallel).log_value);
    const RadialFunction a = u.abs();
    const MeasureProfile mu = MeasureProfile::hyperbolic();
    CHECK(distribution(a, 0.1, mu, Exec::serial) == distribution(a, 0.1, mu, Exec::parallel));
  }
}
