#pragma once

#include "pbflow/profile.hpp"
#include "pbflow/spectral.hpp"

namespace pbflow {

// Leading-order boundary-layer solution in von Mises variables. Both walls
// are solved in the canonical frame psi in [-L, 0] with the wall at psi = 0
// and decay toward psi = -L; the inner wall maps to it by reflecting its own
// layer variable, with diffusivity factor kappa = r0.
struct VonMisesField {
  WallSide side = WallSide::outer;
  std::shared_ptr<const ThetaGrid> theta;
  std::shared_ptr<const Grid1D> psi;  // canonical [-L, 0]
  Field2D Q;  // total Q = U^2 - U_wall^2; Q(theta,0) = wall datum, Q -> 0 far
  Field2D U;  // script-U = sqrt(Q + U_wall^2) > 0
  double U_wall = 0.0;
  double kappa = 1.0;
  std::vector<double> contraction_ratios;
  int iterations = 0;
};

// Physical-variable leading order fields on the wall's own layer grid
// (Y in [-L_Y, 0] outer, Z in [0, L_Z] inner).
struct PrandtlLeading {
  WallSide side = WallSide::outer;
  std::shared_ptr<const ThetaGrid> theta;
  std::shared_ptr<const Grid1D> layer;
  Field2D u_p0;
  Field2D v_p1;
  Field2D p_p1;
  Vector v_p1_wall;  // v_p1 at the wall node, used as Euler boundary data
  double U_wall = 0.0;
  double kappa = 1.0;
};

// Zero-mean wall datum for the heat seed: 2*alpha*eta*f + eta^2 f^2 - eta^2<f^2>
// (outer); the inner datum uses beta, g.
Vector wall_datum(const BoundaryData& bd, WallSide side, const ThetaGrid& th);

// Closed-form decaying solution of Q_theta = kappa U_wall Q_psipsi with the
// given wall datum, built mode by mode.
Field2D heat_seed(const Vector& datum, double u_wall, double kappa,
                  std::shared_ptr<const ThetaGrid> theta, std::shared_ptr<const Grid1D> psi);

// Linear operator L: solves Phi_theta - kappa U_wall Phi_psipsi = Lambda_theta
// with homogeneous Dirichlet data at both ends; zero mode returns zero.
Field2D apply_L(const Field2D& lambda, double u_wall, double kappa);

// Nonlinear map H(Q) = Q + Q0 - 2 U sqrt(Q + Q0 + U^2) + 2 U^2 (pointwise).
Field2D map_H(const Field2D& q, const Field2D& q0, double u_wall);

struct FixedPointOptions {
  double tol = 1e-10;
  int max_iter = 50;
  int n_psi = 64;
  double psi_depth = 0.0;  // 0: automatic from the decay rate of mode 1
  double stretch = 1.5;
  std::shared_ptr<const ThetaGrid> theta;  // optional shared angular grid
};

// Contraction iteration Q_{n+1} = L(H(Q_n)) from Q = 0. Throws SolverError
// when the iteration stops contracting (eta outside the admissible range).
VonMisesField fixed_point(const BoundaryData& bd, WallSide side, double u_wall,
                          const FixedPointOptions& opts = {});

// Equation residual 2 U_theta - kappa (U^2)_psipsi of a converged field
// (diagnostic; discrete L2 norm).
double von_mises_residual(const VonMisesField& vm);

struct ToPhysicalOptions {
  int n_layer = 64;
  double stretch = 1.5;
  double decay_tol = 1e-6;
};

// Invert the von Mises transform: Y(theta,psi) = int_0^psi ds/U, resample to a
// fixed layer grid, recover v_p1 from continuity and p_p1 from the normal
// momentum balance.
PrandtlLeading to_physical(const VonMisesField& vm, const ToPhysicalOptions& opts = {});

// Residual of the physical-variable Prandtl system on the recovered fields
// (discrete L2 of the tangential momentum equation).
double prandtl_residual(const PrandtlLeading& pl);

}  // namespace pbflow
