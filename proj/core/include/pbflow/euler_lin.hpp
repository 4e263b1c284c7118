#pragma once

#include "pbflow/profile.hpp"
#include "pbflow/spectral.hpp"

namespace pbflow {

// Smooth monotone cutoff: 0 on [r0, r1], 1 on [r2, 1], quintic smoothstep in
// between (C^2 junctions), r1 = (1+2 r0)/3, r2 = (2+r0)/3.
struct CutoffChi {
  double r1 = 0.0, r2 = 0.0;

  explicit CutoffChi(double r0) : r1((1.0 + 2.0 * r0) / 3.0), r2((2.0 + r0) / 3.0) {}
  double chi(double r) const;
  double dchi(double r) const;
  double d2chi(double r) const;
};

// One order of the Euler hierarchy on the annulus grid.
struct EulerOrder {
  int k = 1;
  Field2D u, v;
  Field2D p;                      // periodic part of the pressure
  double p_theta_gradient = 0.0;  // constant d_theta p (multivalued part)
  double A_blend_outer = 0.0;     // zero-mode blend constants (chi A + (1-chi) A^)
  double A_blend_inner = 0.0;
  Vector corrector;               // A_1(r) profile when k == 1, else empty
};

// Per-mode radial solve of -Lap(rv) + U_e (rv) = R with Dirichlet data
// rv(1) = bc_outer, rv(r0) = r0 bc_inner (bc given as v-traces). The zero
// modes of R and of the boundary data must vanish (solvability); the zero
// mode of the solution is set to zero.
Field2D solve_vek(const Field2D& curl_rhs, const Vector& bc_outer_v, const Vector& bc_inner_v,
                  const ShearProfile& prof, double zero_mode_tol = 1e-7);

// Homogeneous case helper.
Field2D solve_vek_homogeneous(std::shared_ptr<const ThetaGrid> th,
                              std::shared_ptr<const Grid1D> rad, const Vector& bc_outer_v,
                              const Vector& bc_inner_v, const ShearProfile& prof);

// u from the divergence-free condition, mode-wise u_n = -(r v_n)'/(i n);
// zero mode = chi(r) a_outer + (1-chi) a_inner (+ corrector when given).
Field2D uek_from_continuity(const Field2D& v, const CutoffChi& chi, double a_outer,
                            double a_inner, const Vector* corrector = nullptr);

// Radial corrector BVP r A'' + A' - A/r = rhs, A(r0) = A(1) = 0.
Vector corrector_A1(const Vector& rhs, const Grid1D& rad);

// Pressure construction for order k. f_quad and g_quad are the known
// (quadratic + viscous-remainder) forcings of the two momentum equations,
// source_const is the constant right side of the first equation (2 delta c~
// at k = 2). Residuals of both momentum equations are checked to check_tol.
struct PressureResult {
  Field2D p;             // periodic, zero mean over the annulus
  double theta_gradient; // constant part of d_theta p
  double residual_u = 0.0, residual_v = 0.0;
};
PressureResult pek_construct(int k, const Field2D& u, const Field2D& v, const Field2D& f_quad,
                             const Field2D& g_quad, double source_const, const ShearProfile& prof,
                             double check_tol = 1e-8);

// Solvability diagnostic: max over r of |(1/2pi) oint forcing dtheta|.
double solvability_check(const Field2D& forcing);

// Quadratic forcings of the second-order equations built from an order-1 pair.
struct QuadForcings {
  Field2D f;  // tangential equation
  Field2D g;  // normal equation
};
QuadForcings euler_quad_forcings(const Field2D& u1, const Field2D& v1);

// Third-order forcings: quadratic (1,2) terms plus the viscous remainder of
// the order-1 fields.
QuadForcings euler_third_forcings(const Field2D& u1, const Field2D& v1, const Field2D& u2,
                                  const Field2D& v2);

// Curl-form right side [d_r S1 - (1/r) d_theta S2] / u_e feeding solve_vek,
// with S1 = source_const - f_quad, S2 = -g_quad.
Field2D curl_rhs(const Field2D& f_quad, const Field2D& g_quad, double source_const,
                 const ShearProfile& prof);

// Divergence d_theta u + d_r(r v) (diagnostic).
Field2D euler_divergence(const Field2D& u, const Field2D& v);

}  // namespace pbflow
