#include <benchmark/benchmark.h>

#include <cmath>

#include "pbflow/spectral.hpp"

using namespace pbflow;

namespace {

Field2D sample_field(int nt, int nr) {
  auto th = std::make_shared<const ThetaGrid>(nt);
  auto rad = Grid1D::radial(0.5, nr);
  Field2D f(th, rad);
  for (int i = 0; i < nt; ++i)
    for (int j = 0; j < nr; ++j)
      f.v(i, j) = std::cos(th->node(i)) * std::exp(rad->node(j));
  return f;
}

}  // namespace

static void BM_dtheta(benchmark::State& state) {
  Field2D f = sample_field(32, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(d_theta(f));
}
BENCHMARK(BM_dtheta)->Arg(64)->Arg(96);

static void BM_dradial(benchmark::State& state) {
  Field2D f = sample_field(32, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(d_radial(f, 2));
}
BENCHMARK(BM_dradial)->Arg(64)->Arg(96);

static void BM_grid_build(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(Grid1D::radial(0.5, state.range(0)));
}
BENCHMARK(BM_grid_build)->Arg(64)->Arg(128);

static void BM_interp_row(benchmark::State& state) {
  auto rad = Grid1D::radial(0.5, 64);
  double x = 0.6;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rad->interp_weights(x));
    x = 0.5 + std::fmod(x, 0.5);
  }
}
BENCHMARK(BM_interp_row);

BENCHMARK_MAIN();
