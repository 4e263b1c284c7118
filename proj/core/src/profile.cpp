#include "pbflow/profile.hpp"

#include <cmath>

namespace pbflow {

void BoundaryData::validate() const {
  if (!(alpha > 0.0)) throw InvalidArgument("BoundaryData: alpha must be > 0");
  if (!(beta > 0.0)) throw InvalidArgument("BoundaryData: beta must be > 0");
  if (eta < 0.0) throw InvalidArgument("BoundaryData: eta must be >= 0");
  if (!(r0 > 0.0 && r0 < 1.0)) throw InvalidArgument("BoundaryData: r0 must be in (0,1)");
  for (const auto* modes : {&f_modes, &g_modes})
    for (const auto& m : *modes)
      if (m.k <= 0) throw InvalidArgument("BoundaryData: perturbation modes must have k >= 1 (zero mean)");
}

static Vector eval_modes(const ThetaGrid& th, const std::vector<FourierMode>& modes) {
  Vector out = Vector::Zero(th.size());
  for (const auto& m : modes) {
    for (int i = 0; i < th.size(); ++i) {
      const double t = th.node(i);
      out[i] += 2.0 * (m.re * std::cos(m.k * t) - m.im * std::sin(m.k * t));
    }
  }
  return out;
}

Vector BoundaryData::eval_f(const ThetaGrid& th) const { return eval_modes(th, f_modes); }
Vector BoundaryData::eval_g(const ThetaGrid& th) const { return eval_modes(th, g_modes); }

static double mean_square(const std::vector<FourierMode>& modes) {
  // Parseval: (1/2pi) \oint f^2 = sum_k 2 |c_k|^2 over the k >= 1 modes.
  double acc = 0.0;
  for (const auto& m : modes) acc += 2.0 * (m.re * m.re + m.im * m.im);
  return acc;
}

double BoundaryData::mean_square_f() const { return mean_square(f_modes); }
double BoundaryData::mean_square_g() const { return mean_square(g_modes); }

WallSpeeds wall_speeds(const BoundaryData& bd) {
  bd.validate();
  WallSpeeds ws;
  ws.outer = std::sqrt(bd.alpha * bd.alpha + bd.eta * bd.eta * bd.mean_square_f());
  ws.inner = std::sqrt(bd.beta * bd.beta + bd.eta * bd.eta * bd.mean_square_g());
  return ws;
}

BaseCoeffs solve_base_coeffs(double u_outer, double u_inner, double r0) {
  if (!(r0 > 0.0 && r0 < 1.0)) throw InvalidArgument("solve_base_coeffs: r0 must be in (0,1)");
  // a0 + b0 = U_o; a0 r0 + b0/r0 = U_i. Unique since r0 != 1/r0.
  const double det = 1.0 / r0 - r0;
  BaseCoeffs c;
  c.a0 = (u_outer / r0 - u_inner) / det;
  c.b0 = (u_inner - u_outer * r0) / det;
  return c;
}

TildeCoeffs solve_tilde_coeffs(double c_t, double r0) {
  if (!(r0 > 0.0 && r0 < 1.0)) throw InvalidArgument("solve_tilde_coeffs: r0 must be in (0,1)");
  TildeCoeffs t;
  t.c_t = c_t;
  // at + bt = 0; at r0 + bt/r0 + ct r0 ln r0 = 0.
  t.a_t = -c_t * r0 * std::log(r0) / (r0 - 1.0 / r0);
  t.b_t = -t.a_t;
  if (c_t != 0.0) {
    const int samples = 4001;
    for (int i = 0; i <= samples; ++i) {
      const double r = r0 + (1.0 - r0) * i / samples;
      const double val = t.a_t * r + t.b_t / r + t.c_t * r * std::log(r);
      if (val < -1e-12 * std::abs(c_t))
        throw ConsistencyError("solve_tilde_coeffs: u~ < 0 at r=" + std::to_string(r) +
                               " (value " + std::to_string(val) + ")");
    }
  }
  return t;
}

double ShearProfile::u(double r) const { return ca() * r + cb() / r + cc() * r * std::log(r); }
double ShearProfile::du(double r) const {
  return ca() - cb() / (r * r) + cc() * (std::log(r) + 1.0);
}
double ShearProfile::d2u(double r) const { return 2.0 * cb() / (r * r * r) + cc() / r; }
double ShearProfile::d3u(double r) const { return -6.0 * cb() / std::pow(r, 4) - cc() / (r * r); }
double ShearProfile::d4u(double r) const { return 24.0 * cb() / std::pow(r, 5) + 2.0 * cc() / std::pow(r, 3); }
double ShearProfile::vorticity(double r) const { return 2.0 * ca() + cc() + 2.0 * cc() * std::log(r); }
double ShearProfile::tilde_u(double r) const { return a_t * r + b_t / r + c_t * r * std::log(r); }

double ShearProfile::dpe(double r, int order) const {
  // p_e' = u^2 / r. Higher orders by Leibniz on (u^2) * (1/r).
  if (order < 1 || order > 4) throw InvalidArgument("ShearProfile::dpe: order in 1..4");
  const double w0 = u(r) * u(r);
  const double w1 = 2.0 * u(r) * du(r);
  const double w2 = 2.0 * (du(r) * du(r) + u(r) * d2u(r));
  const double w3 = 2.0 * (3.0 * du(r) * d2u(r) + u(r) * d3u(r));
  const double inv[4] = {1.0 / r, -1.0 / (r * r), 2.0 / (r * r * r), -6.0 / std::pow(r, 4)};
  const double w[4] = {w0, w1, w2, w3};
  const int m = order - 1;  // derivative order of the product u^2/r
  double acc = 0.0;
  double binom = 1.0;
  for (int j = 0; j <= m; ++j) {
    acc += binom * w[j] * inv[m - j];
    binom = binom * (m - j) / (j + 1.0);
  }
  return acc;
}

double ShearProfile::min_speed(int samples) const {
  double m = u(r0);
  for (int i = 0; i <= samples; ++i) {
    const double r = r0 + (1.0 - r0) * i / samples;
    m = std::min(m, u(r));
  }
  return m;
}

ShearEval eval_shear(const ShearProfile& p, double r) {
  ShearEval e;
  e.u = p.u(r);
  e.du = p.du(r);
  e.d2u = p.d2u(r);
  e.w = p.vorticity(r);
  return e;
}

double ue_potential(const ShearProfile& p, double r) {
  const double ur = p.u(r);
  if (!(ur > 0.0))
    throw SolverError("ue_potential: u_e <= 0 at r=" + std::to_string(r) + " (singular profile)");
  return (p.d2u(r) + p.du(r) / r - ur / (r * r)) / ur;
}

ShearProfile make_shear_profile(const BoundaryData& bd, double delta, double c_t) {
  if (delta < 0.0) throw InvalidArgument("make_shear_profile: delta must be >= 0");
  const WallSpeeds ws = wall_speeds(bd);
  const BaseCoeffs base = solve_base_coeffs(ws.outer, ws.inner, bd.r0);
  TildeCoeffs t;
  try {
    t = solve_tilde_coeffs(c_t, bd.r0);
  } catch (const ConsistencyError&) {
    t = solve_tilde_coeffs(-c_t, bd.r0);  // the feasible branch has a definite sign
  }
  ShearProfile p;
  p.a0 = base.a0;
  p.b0 = base.b0;
  p.a_t = t.a_t;
  p.b_t = t.b_t;
  p.c_t = t.c_t;
  p.delta = delta;
  p.r0 = bd.r0;
  if (p.min_speed() <= 0.0)
    throw ConsistencyError("make_shear_profile: composite base speed not positive on [r0,1]");
  return p;
}

}  // namespace pbflow
