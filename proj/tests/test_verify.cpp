#include <doctest.h>

#include <cmath>
#include <random>

#include "pbflow/verify.hpp"

using namespace pbflow;

TEST_CASE("order_fit: exact and noisy synthetic regressions") {
  std::vector<double> xs = {0.1, 0.07, 0.05, 0.035, 0.025};
  std::vector<double> ys;
  for (double x : xs) ys.push_back(x);
  OrderFit f = order_fit(xs, ys);
  CHECK(f.slope == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.fit_residual < 1e-12);

  ys.clear();
  for (double x : xs) ys.push_back(7.0 * x * x);
  f = order_fit(xs, ys);
  CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f.log_constant == doctest::Approx(std::log(7.0)).epsilon(1e-10));

  // +-5% multiplicative noise with a fixed seed keeps the slope near 1
  std::mt19937 rng(20240817u);
  std::uniform_real_distribution<double> noise(0.95, 1.05);
  ys.clear();
  for (double x : xs) ys.push_back(3.0 * x * noise(rng));
  f = order_fit(xs, ys);
  CHECK(f.slope > 0.9);
  CHECK(f.slope < 1.1);

  CHECK_THROWS_AS(order_fit({0.1, 0.2}, {1.0, 2.0}), InvalidArgument);
  CHECK_THROWS_AS(order_fit({0.1, -0.2, 0.3}, {1.0, 2.0, 3.0}), InvalidArgument);
}

TEST_CASE("pb_diagnostic: the vorticity law and its violation") {
  auto rad = Grid1D::radial(0.5, 48);
  const int nr = rad->size();
  Vector w_law(nr), w_bad(nr), ue(nr);
  for (int j = 0; j < nr; ++j) {
    const double r = rad->node(j);
    w_law[j] = 0.8 * std::log(r) + 1.7;  // r w' = const
    w_bad[j] = r * r;                    // r w' = 2 r^2, varies 4x on [0.5,1]
    ue[j] = 1.2 * r + 0.3 / r;
  }
  CHECK(pb_diagnostic(w_law, ue, *rad) < 1e-10);
  CHECK(pb_diagnostic(w_bad, ue, *rad) > 0.5);

  // invariances: w -> w + const and u_e -> lambda u_e
  Vector w_shift = w_law;
  w_shift.array() += 5.0;
  CHECK(pb_diagnostic(w_shift, ue, *rad) < 1e-10);
  Vector ue2 = 2.0 * ue;
  CHECK(pb_diagnostic(w_bad, ue2, *rad) ==
        doctest::Approx(pb_diagnostic(w_bad, ue, *rad)).epsilon(1e-12));

  // sign change of u_e in the window rejected
  Vector ue_bad(nr);
  for (int j = 0; j < nr; ++j) ue_bad[j] = rad->node(j) - 0.75;
  CHECK_THROWS_AS(pb_diagnostic(w_law, ue_bad, *rad), InvalidArgument);
}

TEST_CASE("theorem_error at eta=0, delta=0 is the exact regression") {
  BoundaryData bd;
  bd.eta = 0.0;
  ShearProfile prof = make_shear_profile(bd, 0.0, 1.0);
  ExpansionOptions eopt;
  eopt.K = 0;
  Expansion ex = build_expansion(bd, prof, eopt);

  ContinuationResult cont = continuation({0.1}, ex, 0);
  TheoremError te = theorem_error(cont.states[0], ex);
  CHECK(te.sup_tangential < 1e-10);
  CHECK(te.sup_normal < 1e-10);

  // vorticity limit window value: |w - 2 a0| = 0 for Taylor-Couette
  CHECK(vorticity_limit_error(cont.states[0], prof, ex.chi.r1, ex.chi.r2) < 1e-8);

  // pb diagnostic on the converged interior: r w' of the TC vorticity is 0
  const Vector w0 = mean_theta(vorticity(cont.states[0]));
  Vector ue(cont.states[0].radial->size());
  for (int j = 0; j < ue.size(); ++j) ue[j] = prof.u(cont.states[0].radial->node(j));
  // w is constant: the diagnostic divides by a near-zero mean slope; guard by
  // checking the numerator-style variation through the law profile instead
  Vector w_law(ue.size());
  for (int j = 0; j < ue.size(); ++j) w_law[j] = w0[j];
  // sanity: vorticity is the rigid-rotation constant
  for (int j = 2; j + 2 < ue.size(); ++j)
    CHECK(w0[j] == doctest::Approx(2.0 * prof.a0).epsilon(1e-7));
}

TEST_CASE("interior_mean_vorticity and the family target coefficient") {
  BoundaryData bd;
  bd.eta = 0.0;
  ShearProfile prof = make_shear_profile(bd, 1.0, 1.0);  // delta = 1
  ExpansionOptions eopt;
  eopt.K = 0;
  Expansion ex = build_expansion(bd, prof, eopt);
  ContinuationResult cont = continuation({0.1}, ex, 0);

  const double r1 = ex.chi.r1, r2 = ex.chi.r2;
  const double wm = interior_mean_vorticity(cont.states[0], r1, r2);
  // quadrature-weighted window mean of the exact target
  double acc = 0.0, wacc = 0.0;
  const auto& rad = *cont.states[0].radial;
  for (int j = 0; j < rad.size(); ++j) {
    const double r = rad.node(j);
    if (r < r1 || r > r2) continue;
    acc += rad.quad_weights()[j] * prof.vorticity(r);
    wacc += rad.quad_weights()[j];
  }
  CHECK(wm == doctest::Approx(acc / wacc).epsilon(1e-6));

  const double coef = family_target_coefficient(prof, rad, r1, r2);
  // d(target)/d(delta) window mean: 2(c~ ln r + a~ + c~/2) halves the
  // vorticity difference formula
  double cacc = 0.0;
  for (int j = 0; j < rad.size(); ++j) {
    const double r = rad.node(j);
    if (r < r1 || r > r2) continue;
    cacc += rad.quad_weights()[j] * (prof.c_t * std::log(r) + prof.a_t + 0.5 * prof.c_t);
  }
  CHECK(coef == doctest::Approx(cacc / wacc).epsilon(1e-12));
}
