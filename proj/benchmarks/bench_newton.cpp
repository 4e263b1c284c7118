#include <benchmark/benchmark.h>

#include "pbflow/ns_solver.hpp"

using namespace pbflow;

namespace {

NSState tc_state(int nt, int nr, double eps) {
  BoundaryData bd;
  bd.eta = 0.0;
  const WallSpeeds ws = wall_speeds(bd);
  const BaseCoeffs c = solve_base_coeffs(ws.outer, ws.inner, bd.r0);
  ShearProfile prof;
  prof.r0 = bd.r0;
  prof.a0 = c.a0;
  prof.b0 = c.b0;
  return shear_state(prof, eps, std::make_shared<const ThetaGrid>(nt), Grid1D::radial(bd.r0, nr));
}

}  // namespace

static void BM_ns_residual(benchmark::State& state) {
  NSState s = tc_state(32, static_cast<int>(state.range(0)), 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(ns_residual(s));
}
BENCHMARK(BM_ns_residual)->Arg(44)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_newton_tc(benchmark::State& state) {
  // one full newton_solve from the exact seed: residual metric + one
  // convergence check, no factorization needed
  NSState s = tc_state(16, 44, 0.1);
  BoundaryData bd;
  bd.eta = 0.0;
  for (auto _ : state) benchmark::DoNotOptimize(newton_solve(bd, s));
}
BENCHMARK(BM_newton_tc)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
