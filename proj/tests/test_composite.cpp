#include <doctest.h>

#include <cmath>

#include "pbflow/composite.hpp"

using namespace pbflow;

namespace {

Expansion build_default(double eta, double delta, int K) {
  BoundaryData bd;
  bd.eta = eta;
  ShearProfile prof = make_shear_profile(bd, delta, 1.0);
  ExpansionOptions opt;
  opt.K = K;
  return build_expansion(bd, prof, opt);
}

}  // namespace

TEST_CASE("composite at K=0, eta=0 is the bare shear") {
  Expansion ex = build_default(0.0, 0.7, 0);
  CompositeSolution c = assemble(ex, 0, 0.05);
  for (int j = 0; j < c.radial->size(); ++j) {
    const double r = c.radial->node(j);
    for (int i = 0; i < c.theta->size(); ++i) {
      CHECK(std::abs(c.u.v(i, j) - ex.prof.u(r)) < 1e-10);
      CHECK(std::abs(c.v.v(i, j)) < 1e-12);
    }
  }
}

TEST_CASE("Taylor-Couette composite has machine-zero residual at any viscosity") {
  // eta = 0, delta = 0: the composite is a r + b/r exactly; the viscous
  // operator annihilates it and the pressure balances the centrifugal term
  Expansion ex = build_default(0.0, 0.0, 1);
  for (double eps : {1.0, 0.1}) {
    CompositeSolution c = assemble(ex, 1, eps);
    ResidualReport rep = residual(c);
    CHECK(rep.ru_l2 < 1e-10);
    CHECK(rep.rv_l2 < 1e-10);
  }
}

TEST_CASE("composite invariants at K in {0,1}, eta=0.05") {
  Expansion ex = build_default(0.05, 0.5, 1);
  for (int K : {0, 1}) {
    CompositeSolution c = assemble(ex, K, 0.1);
    // boundary traces exact
    CHECK(c.wall_trace_error < 1e-12);
    // divergence-free after the corrector (ingredient-level assembly)
    const double uscale = norm_max(c.u);
    CHECK(norm_max(c.div_ingredient) < 1e-10 * std::max(1.0, uscale));
    // corrector vanishes on the walls
    const int nr = c.radial->size();
    for (int i = 0; i < c.theta->size(); ++i) {
      CHECK(std::abs(c.h.v(i, 0)) < 1e-10);
      CHECK(std::abs(c.h.v(i, nr - 1)) < 1e-10);
    }
    // positivity
    const WallSpeeds ws = wall_speeds(ex.bd);
    CHECK(c.min_u >= 0.5 * std::min(ws.outer, ws.inner));
  }
}

TEST_CASE("composite residual falls fast in eps at K=1") {
  Expansion ex = build_default(0.05, 0.5, 1);
  ResidualReport a = residual(assemble(ex, 1, 0.1));
  ResidualReport b = residual(assemble(ex, 1, 0.05));
  // slope >= 1.8 means at least a factor 2^1.8 ~ 3.5 per halving
  CHECK(a.ru_l2 / b.ru_l2 > 3.0);
}

TEST_CASE("layer collision parameter error") {
  Expansion ex = build_default(0.05, 0.5, 0);
  CHECK_THROWS_AS(assemble(ex, 0, 1.5), InvalidArgument);
}

TEST_CASE("composite on a finer target grid keeps the invariants") {
  Expansion ex = build_default(0.05, 0.5, 1);
  auto fine = Grid1D::radial(ex.bd.r0, 96);
  CompositeSolution c = assemble(ex, 1, 0.05, fine);
  CHECK(c.wall_trace_error < 1e-12);
  CHECK(norm_max(c.div_ingredient) < 1e-10 * std::max(1.0, norm_max(c.u)));
}
