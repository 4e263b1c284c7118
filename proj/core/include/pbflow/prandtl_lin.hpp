#pragma once

#include <optional>

#include "pbflow/jet.hpp"
#include "pbflow/prandtl0.hpp"

namespace pbflow {

// Order-k boundary layer correction at one wall.
struct BoundaryLayerOrder {
  WallSide side = WallSide::outer;
  int k = 1;
  Field2D u_pk;    // solves the order-k linearized Prandtl problem
  Field2D v_pk1;   // order-(k+1) normal velocity from continuity
  Field2D p_pk1;   // order-(k+1) layer pressure
  double A_inf = 0.0;  // far-field constant of u_pk
  double gamma_check = 0.0;  // L2 difference of the gamma and gamma/4 solves
};

// Known forcing of one order (momentum forcing f_k and pressure source g_k).
struct ForcingField {
  WallSide side = WallSide::outer;
  int order = 1;
  Field2D values;
  double far_fraction = 0.0;  // |values| at the far node / max|values|
};

// -- compactly supported boundary lift ----------------------------------
// zeta(s) = (1+s)^5 (1+7s) on s in [-1,0]: zeta(0)=1, C^4 contact at s=-1,
// integral zero; int_0^s zeta = s(1+s)^6.
double lift_zeta(double s, int deriv = 0);

// Lift sampled on a layer grid (deriv in {0,1,2} is d/dl), and its cumulative
// integral from the wall. support is the physical support length.
Vector lift_on_grid(const Grid1D& g, double support, int deriv);
Vector lift_cumwall_on_grid(const Grid1D& g, double support);

// -- jet-based forcing assembly ------------------------------------------
// Everything known about one wall when assembling the order-k forcings.
struct LayerStage {
  WallSide side = WallSide::outer;
  double wall_r = 1.0;  // also the diffusivity factor kappa
  std::shared_ptr<const ThetaGrid> theta;
  std::shared_ptr<const Grid1D> layer;
  // layer fields by order; entries beyond what is known stay empty.
  // u_p[i] are the far-field-subtracted versions used in the expansions.
  std::array<std::optional<Field2D>, 4> u_p;   // orders 0..3
  std::array<std::optional<Field2D>, 5> v_p;   // orders 0..4 (0 unused)
  std::array<std::optional<Field2D>, 5> p_p;   // orders 0..4 (0 unused)
  // Euler wall traces: tr_u[i][m] = d_r^m of the order-i Euler tangential
  // field at the wall, as a theta line; likewise tr_v, tr_p.
  std::array<std::array<std::optional<Vector>, 5>, 4> tr_u, tr_v, tr_p;

  Field2D ell() const;  // the layer coordinate as a field
};

// Full tangential / normal momentum jets of the wall expansion.
Jet momentum_jet_u(const LayerStage& st);
Jet momentum_jet_v(const LayerStage& st);

// Order-k forcings: f_k = -(eps^k coefficient of the tangential momentum jet)
// with the stage filled only with known fields; g_k likewise from the normal
// momentum jet after the order-k solve.
ForcingField assemble_forcing(const LayerStage& st, int k, bool tangential);

// -- linearized solve ------------------------------------------------------
struct LinearizedOptions {
  double gamma = 1e-5;
  bool gamma_crosscheck = true;
  double gamma_check_tol = 1e-5;
  double a_inf_variation_tol = 1e-6;
  double lift_support = 2.0;
};

struct LinearizedProblem {
  WallSide side = WallSide::outer;
  double kappa = 1.0;
  double U_wall = 1.0;
  // base coefficient fields on the layer grid
  Field2D u_base;       // U_wall + u_p0
  Field2D v_base;       // v_e1(theta, wall) + v_p1
  Field2D du0_layer;    // d_l u_p0
  Field2D du0_theta;    // d_theta u_p0
  Field2D forcing;      // the jet forcing F_k (known side)
  Vector wall_trace;    // T(theta): boundary condition u_pk(theta, 0) = -T
  Field2D v_prev;       // v_p^{(k)} for the l v^k d_l u0 right-side term
};

// Solve the gamma-regularized order-k problem; recovers u_pk and A_inf.
// v and p recovery are separate (below) because their anchoring differs at
// the top order.
BoundaryLayerOrder solve_linearized(const LinearizedProblem& pb, int k,
                                    const LinearizedOptions& opts = {});

// v_p^{(k+1)} = -(1/kappa)[cum(d_theta u_pk) + l v_pk], anchored at the far
// end (decaying) or at the wall (top order).
Field2D recover_v(const Field2D& u_pk, const Field2D& v_pk, double kappa, bool wall_anchored);

// Layer pressure of order k+1 from the source g_k: d_l p = g_k / kappa with
// decay anchoring for orders 2 and 3 and wall anchoring for order 4.
Field2D pressure_integrate(WallSide side, int order, const ForcingField& g,
                           double kappa, double decay_tol = 1e-5);

// Residual of the order-k linearized Prandtl equation on recovered fields
// (un-regularized operator; gamma contributes O(gamma)).
double linearized_residual(const LinearizedProblem& pb, const BoundaryLayerOrder& ord);

}  // namespace pbflow
