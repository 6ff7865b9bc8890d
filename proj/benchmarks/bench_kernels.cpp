#include <benchmark/benchmark.h>

#include <cmath>

#include "diamond/geometry.hpp"
#include "diamond/kernels.hpp"
#include "diamond/semigroup.hpp"

using namespace diamond;

static void BM_CircleKernel(benchmark::State& state) {
  const double t = state.range(0) / 100.0;
  double theta = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(circle_kernel(t, 0.0, theta));
    theta = theta < 6.0 ? theta + 0.01 : 0.1;
  }
}
BENCHMARK(BM_CircleKernel)->Arg(5)->Arg(100)->Arg(500);

// Reused kernel object: the per-pair cost once series are built.
static void BM_DiamondKernelPair(benchmark::State& state) {
  const auto seq = ParameterSequences::regular(2, 2);
  const int level = static_cast<int>(state.range(0));
  const DiamondKernel k(seq, level, 0.5);
  const auto x = extend(make_point(seq, 0.3), level);
  const auto y = extend(make_point(seq, 0.41), level);
  for (auto _ : state) benchmark::DoNotOptimize(k(x, y));
}
BENCHMARK(BM_DiamondKernelPair)->Arg(1)->Arg(4)->Arg(10);

static void BM_DiamondKernelSetup(benchmark::State& state) {
  const auto seq = ParameterSequences::regular(2, 2);
  for (auto _ : state) benchmark::DoNotOptimize(DiamondKernel(seq, 4, 0.5));
}
BENCHMARK(BM_DiamondKernelSetup);

static void BM_ApplySemigroup(benchmark::State& state) {
  const auto seq = ParameterSequences::regular(2, 2);
  const auto layout = make_layout(seq, 1, static_cast<int>(state.range(0)));
  const auto f = GridFunction::sample(layout, [](const PointAddress& p) { return std::cos(p.theta); });
  for (auto _ : state) benchmark::DoNotOptimize(apply_semigroup(f, 0.5));
  state.SetComplexityN(static_cast<int64_t>(layout->node_count()));
}
BENCHMARK(BM_ApplySemigroup)->Arg(25)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond)->Complexity(benchmark::oNSquared);

static void BM_DistanceLimit(benchmark::State& state) {
  const auto seq = ParameterSequences::regular(2, 3);
  const auto x = make_point(seq, 0.3, {1, 2});
  const auto y = make_point(seq, 0.5, {2, 3});
  for (auto _ : state) benchmark::DoNotOptimize(distance_limit(seq, x, y, 1e-12));
}
BENCHMARK(BM_DistanceLimit);
BENCHMARK_MAIN();
