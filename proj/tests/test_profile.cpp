#include <doctest.h>

#include <cmath>

#include "pbflow/profile.hpp"
#include "pbflow/spectral.hpp"

using namespace pbflow;

TEST_CASE("wall_speeds: Batchelor-Wood closed forms") {
  BoundaryData bd;
  bd.alpha = 2.0;
  bd.beta = 1.5;
  bd.eta = 0.0;
  WallSpeeds ws = wall_speeds(bd);
  CHECK(ws.outer == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(ws.inner == doctest::Approx(1.5).epsilon(1e-15));

  bd.alpha = 1.0;
  bd.eta = 0.2;
  bd.f_modes = {{1, 0.5, 0.0}};  // f = cos(theta), <f^2> = 1/2
  ws = wall_speeds(bd);
  CHECK(ws.outer == doctest::Approx(std::sqrt(1.02)).epsilon(1e-12));

  // Parseval check against trapezoid quadrature of f^2
  ThetaGrid th(64);
  Vector f = bd.eval_f(th);
  double msq = 0.0;
  for (int i = 0; i < th.size(); ++i) msq += f[i] * f[i];
  msq /= th.size();
  CHECK(bd.mean_square_f() == doctest::Approx(msq).epsilon(1e-13));
  CHECK(bd.mean_square_f() == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("wall_speeds monotone in eta for fixed f") {
  BoundaryData bd;
  bd.f_modes = {{1, 0.5, 0.0}, {3, 0.1, 0.2}};
  double prev = 0.0;
  for (double eta : {0.0, 0.01, 0.02, 0.05, 0.1}) {
    bd.eta = eta;
    const double u = wall_speeds(bd).outer;
    CHECK(u >= prev);
    prev = u;
  }
}

TEST_CASE("solve_base_coeffs: hand-solved cases") {
  BaseCoeffs c = solve_base_coeffs(2.0, 1.5, 0.5);
  CHECK(c.a0 == doctest::Approx(5.0 / 3.0).epsilon(1e-13));
  CHECK(c.b0 == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  CHECK(c.a0 + c.b0 == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(c.a0 * 0.5 + c.b0 / 0.5 == doctest::Approx(1.5).epsilon(1e-13));

  // pure rigid rotation and pure potential vortex
  c = solve_base_coeffs(1.0, 0.5, 0.5);
  CHECK(c.a0 == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(std::abs(c.b0) < 1e-13);
  c = solve_base_coeffs(1.0, 2.0, 0.5);
  CHECK(std::abs(c.a0) < 1e-13);
  CHECK(c.b0 == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("solve_tilde_coeffs: closed-form linear solve and positivity") {
  // c_t = -1 is the feasible branch at r0 = 0.5
  TildeCoeffs t = solve_tilde_coeffs(-1.0, 0.5);
  CHECK(t.a_t == doctest::Approx(0.2310490602).epsilon(1e-8));
  CHECK(t.b_t == doctest::Approx(-0.2310490602).epsilon(1e-8));
  // constraints at both walls
  CHECK(std::abs(t.a_t + t.b_t) < 1e-14);
  CHECK(std::abs(t.a_t * 0.5 + t.b_t / 0.5 + t.c_t * 0.5 * std::log(0.5)) < 1e-14);
  // the opposite sign violates positivity and reports a radius
  CHECK_THROWS_AS(solve_tilde_coeffs(1.0, 0.5), ConsistencyError);
  // zero perturbation
  t = solve_tilde_coeffs(0.0, 0.5);
  CHECK(t.a_t == 0.0);
  CHECK(t.b_t == 0.0);
}

TEST_CASE("make_shear_profile flips to the feasible sign") {
  BoundaryData bd;
  ShearProfile p = make_shear_profile(bd, 1.0, 1.0);
  CHECK(p.c_t == doctest::Approx(-1.0));
  for (double r : {0.5, 0.6, 0.75, 0.9, 1.0}) CHECK(p.tilde_u(r) >= -1e-12);
  CHECK(std::abs(p.tilde_u(1.0)) < 1e-14);
  CHECK(std::abs(p.tilde_u(0.5)) < 1e-14);
  CHECK(p.min_speed() > 0.0);
}

TEST_CASE("eval_shear: vorticity closed forms") {
  ShearProfile p;
  p.r0 = 0.5;

  p.a0 = 1.0;  // rigid rotation
  CHECK(eval_shear(p, 0.7).w == doctest::Approx(2.0).epsilon(1e-14));

  p.a0 = 0.0;
  p.b0 = 1.0;  // potential vortex
  CHECK(eval_shear(p, 0.7).w == doctest::Approx(0.0).epsilon(1e-14));

  p.b0 = 0.0;
  p.c_t = 1.0;
  p.delta = 1.0;  // pure r ln r
  CHECK(p.u(1.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(eval_shear(p, 1.0).w == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p.vorticity(std::exp(1.0)) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("eval_shear vorticity equals spectral (r u)'/r") {
  BoundaryData bd;
  ShearProfile p = make_shear_profile(bd, 0.7, 1.0);
  auto th = std::make_shared<const ThetaGrid>(8);
  auto rad = Grid1D::radial(0.5, 48);
  Field2D ru(th, rad);
  for (int i = 0; i < ru.n_theta(); ++i)
    for (int j = 0; j < ru.n_radial(); ++j) {
      const double r = rad->node(j);
      ru.v(i, j) = r * p.u(r);
    }
  Field2D d = d_radial(ru);
  for (int j = 0; j < rad->size(); ++j) {
    const double r = rad->node(j);
    CHECK(std::abs(d.v(0, j) / r - p.vorticity(r)) < 1e-10);
  }
}

TEST_CASE("composite base bounded below by the wall speeds when u~ >= 0") {
  BoundaryData bd;
  bd.eta = 0.05;
  ShearProfile p = make_shear_profile(bd, 1.0, 1.0);
  const WallSpeeds ws = wall_speeds(bd);
  CHECK(p.min_speed() >= std::min(ws.outer, ws.inner) - 1e-10);
}

TEST_CASE("ue_potential: closed forms and scale invariance") {
  ShearProfile p;
  p.r0 = 0.5;
  p.a0 = 1.3;
  p.b0 = 0.4;  // pure Taylor-Couette: U_e = 0
  for (double r : {0.55, 0.7, 0.95}) CHECK(std::abs(ue_potential(p, r)) < 1e-13);

  // u = r ln r: U_e = 2/(r^2 ln r), evaluated where u > 0
  ShearProfile q;
  q.r0 = 0.5;
  q.c_t = 1.0;
  q.delta = 1.0;
  for (double r : {1.2, 1.5, 2.0}) {
    CHECK(ue_potential(q, r) ==
          doctest::Approx(2.0 / (r * r * std::log(r))).epsilon(1e-12));
  }

  // scale invariance: U_e(2u) = U_e(u)
  ShearProfile p2 = p;
  p2.a0 *= 2.0;
  p2.b0 *= 2.0;
  CHECK(ue_potential(p2, 0.8) == doctest::Approx(ue_potential(p, 0.8)).epsilon(1e-13));

  // singular profile rejected: u <= 0 at the requested radius
  ShearProfile s;
  s.r0 = 0.5;
  s.a0 = 1.0;
  s.b0 = -1.0;  // u(1) = 0
  CHECK_THROWS_AS(ue_potential(s, 1.0), SolverError);
}

TEST_CASE("base pressure derivatives are consistent") {
  BoundaryData bd;
  ShearProfile p = make_shear_profile(bd, 0.5, 1.0);
  // dpe(r,1) = u^2/r, and higher orders match finite differences
  const double r = 0.77;
  CHECK(p.dpe(r, 1) == doctest::Approx(p.u(r) * p.u(r) / r).epsilon(1e-13));
  const double h = 1e-5;
  for (int m = 2; m <= 4; ++m) {
    const double fd = (p.dpe(r + h, m - 1) - p.dpe(r - h, m - 1)) / (2.0 * h);
    CHECK(p.dpe(r, m) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("BoundaryData validation") {
  BoundaryData bd;
  bd.alpha = -1.0;
  CHECK_THROWS_AS(bd.validate(), InvalidArgument);
  bd = BoundaryData{};
  bd.f_modes = {{0, 1.0, 0.0}};  // nonzero mean forbidden
  CHECK_THROWS_AS(bd.validate(), InvalidArgument);
}
