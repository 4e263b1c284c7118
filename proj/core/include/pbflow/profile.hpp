#pragma once

#include <vector>

#include "pbflow/spectral.hpp"

namespace pbflow {

// One Fourier mode of a real zero-mean wall perturbation: coefficient c_k for
// k >= 1 with the conjugate mode implied, f(theta) = sum_k 2 Re(c_k e^{ik t}).
struct FourierMode {
  int k = 1;
  double re = 0.0;
  double im = 0.0;
};

// Prescribed wall velocities: u = alpha + eta f(theta) on r=1 and
// u = beta + eta g(theta) on r=r0, with f, g real and zero-mean.
struct BoundaryData {
  double alpha = 2.0;
  double beta = 1.5;
  double eta = 0.05;
  double r0 = 0.5;
  std::vector<FourierMode> f_modes{{1, 0.5, 0.0}};
  std::vector<FourierMode> g_modes{{1, 0.5, 0.0}};

  void validate() const;
  Vector eval_f(const ThetaGrid& th) const;  // f(theta) on the grid
  Vector eval_g(const ThetaGrid& th) const;
  // (1/2pi) \oint f^2 dtheta via Parseval on the coefficients.
  double mean_square_f() const;
  double mean_square_g() const;
};

// Wall speeds of the limiting Euler flow fixed by the compatibility condition
// u_e^2(wall) = mean of the squared prescribed wall speed.
struct WallSpeeds {
  double outer = 0.0;  // u_e(1)
  double inner = 0.0;  // u_e(r0)
};
WallSpeeds wall_speeds(const BoundaryData& bd);

// Base rotating-shear coefficients from the two wall speeds:
// a0 + b0 = U_outer, a0 r0 + b0/r0 = U_inner.
struct BaseCoeffs {
  double a0 = 0.0;
  double b0 = 0.0;
};
BaseCoeffs solve_base_coeffs(double u_outer, double u_inner, double r0);

// Tilde coefficients for u~(r) = at r + bt/r + ct r ln r with u~(1)=u~(r0)=0.
// Throws if u~ < 0 anywhere on a fine sampling of [r0, 1] (reports the radius).
struct TildeCoeffs {
  double a_t = 0.0;
  double b_t = 0.0;
  double c_t = 0.0;
};
TildeCoeffs solve_tilde_coeffs(double c_t, double r0);

// The one-parameter family u_{e,delta}(r) = a0 r + b0/r + delta u~(r).
struct ShearProfile {
  double a0 = 0.0, b0 = 0.0;
  double a_t = 0.0, b_t = 0.0, c_t = 0.0;
  double delta = 0.0;
  double r0 = 0.5;

  // effective coefficients a r + b/r + c r ln r
  double ca() const { return a0 + delta * a_t; }
  double cb() const { return b0 + delta * b_t; }
  double cc() const { return delta * c_t; }

  double u(double r) const;
  double du(double r) const;
  double d2u(double r) const;
  double d3u(double r) const;
  double d4u(double r) const;
  double vorticity(double r) const;        // (r u)'/r = 2a + c + 2c ln r
  double tilde_u(double r) const;          // the delta-independent u~(r)

  // Base pressure p_e with p_e'(r) = u^2/r; derivatives up to order 4.
  double dpe(double r, int order) const;   // order >= 1

  double min_speed(int samples = 2001) const;
};

struct ShearEval {
  double u = 0.0, du = 0.0, d2u = 0.0, w = 0.0;
};
ShearEval eval_shear(const ShearProfile& p, double r);

// U_e(r) = (u'' + u'/r - u/r^2)/u, the potential in the normal-velocity
// elliptic solve. Throws if u_e <= 0 at r.
double ue_potential(const ShearProfile& p, double r);

// Assemble the family profile for given boundary data. Tries c_t and -c_t to
// satisfy the positivity constraint on u~; throws if neither sign works.
ShearProfile make_shear_profile(const BoundaryData& bd, double delta, double c_t);

}  // namespace pbflow
