#include <benchmark/benchmark.h>

#include "pbflow/prandtl0.hpp"

using namespace pbflow;

static void BM_heat_seed(benchmark::State& state) {
  BoundaryData bd;
  bd.eta = 0.05;
  auto th = std::make_shared<const ThetaGrid>(32);
  auto psi = Grid1D::layer(WallSide::outer, 40.0, 64);
  const Vector datum = wall_datum(bd, WallSide::outer, *th);
  for (auto _ : state) benchmark::DoNotOptimize(heat_seed(datum, 2.0, 1.0, th, psi));
}
BENCHMARK(BM_heat_seed);

static void BM_fixed_point(benchmark::State& state) {
  BoundaryData bd;
  bd.eta = 0.05;
  const double uw = wall_speeds(bd).outer;
  for (auto _ : state) benchmark::DoNotOptimize(fixed_point(bd, WallSide::outer, uw));
}
BENCHMARK(BM_fixed_point)->Unit(benchmark::kMillisecond);

static void BM_to_physical(benchmark::State& state) {
  BoundaryData bd;
  bd.eta = 0.05;
  const double uw = wall_speeds(bd).outer;
  VonMisesField vm = fixed_point(bd, WallSide::outer, uw);
  for (auto _ : state) benchmark::DoNotOptimize(to_physical(vm));
}
BENCHMARK(BM_to_physical)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
