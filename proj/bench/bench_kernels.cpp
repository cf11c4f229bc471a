#include <benchmark/benchmark.h>

#include <numbers>

#include "tmlab/forms.hpp"
#include "tmlab/rearrange.hpp"
#include "tmlab/sampling.hpp"

using namespace tmlab;

namespace {

RadialFunction profile(std::size_t n) {
  Rng rng(1);
  return sample_bumps(RadialGrid::graded(n), rng).abs();
}

Exec exec_of(const benchmark::State& state) { return state.range(1) ? Exec::parallel : Exec::serial; }

void BM_GradientNorm(benchmark::State& state) {
  const RadialFunction u = profile(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gradient_norm_sq(u, exec_of(state)));
}

void BM_EvalJ(benchmark::State& state) {
  const RadialFunction u = profile(static_cast<std::size_t>(state.range(0))).scaled(0.1);
  for (auto _ : state) benchmark::DoNotOptimize(eval_J(u, 4.0 * std::numbers::pi, exec_of(state)).log_value);
}

void BM_Distribution(benchmark::State& state) {
  const RadialFunction u = profile(static_cast<std::size_t>(state.range(0)));
  const MeasureProfile mu = MeasureProfile::hyperbolic();
  for (auto _ : state) benchmark::DoNotOptimize(distribution(u, 0.2, mu, exec_of(state)));
}

void BM_Rearrange(benchmark::State& state) {
  const RadialFunction u = profile(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rearrange_decreasing(u).size());
}

}  // namespace

BENCHMARK(BM_GradientNorm)->ArgsProduct({{4096, 65536}, {0, 1}});
BENCHMARK(BM_EvalJ)->ArgsProduct({{4096, 65536}, {0, 1}});
BENCHMARK(BM_Distribution)->ArgsProduct({{4096, 65536}, {0, 1}});
BENCHMARK(BM_Rearrange)->Args({4096, 0})->Args({65536, 0});

BENCHMARK_MAIN();
