#pragma once

#include <functional>

#include "pbflow/composite.hpp"

namespace pbflow {

// Full steady Navier-Stokes state on the annulus at viscosity eps^2.
// Pressure is the polynomial through its interior-node values (one degree
// pair below the velocities), plus a prescribed constant azimuthal gradient G
// carrying the multivalued part that the rotating-shear family requires.
struct NSState {
  double epsilon = 0.1;
  std::shared_ptr<const ThetaGrid> theta;
  std::shared_ptr<const Grid1D> radial;
  Field2D u, v;
  Matrix p_int;       // n_theta x (n_r - 2) interior pressure values
  double G = 0.0;     // constant d_theta p
  double lambda = 0.0;  // continuity gauge multiplier at the solution

  Field2D pressure_full() const;  // pressure extended to the full grid
};

struct NewtonReport {
  int iterations = 0;  // number of linear solves performed
  std::vector<double> residual_history;
  double final_residual = 0.0;
  bool converged = false;
};

struct NSOptions {
  double tol = 1e-10;
  int max_iter = 25;
  bool line_search = false;  // halve the step when the residual grows
  int min_wall_nodes = 4;    // required collocation nodes within eps of each wall
};

// Pointwise residual fields of the three steady equations (momentum includes
// the G term; no boundary-row replacement).
struct NSResidual {
  Field2D f_u, f_v, f_div;
};
NSResidual ns_residual(const NSState& s);

// Scalar convergence metric: quadrature-weighted L2 over the interior
// collocation rows of all three equations plus wall mismatches.
double ns_residual_norm(const NSState& s, const BoundaryData& bd);

// Newton iteration with the exact analytic Jacobian and a dense LU solve.
std::pair<NSState, NewtonReport> newton_solve(const BoundaryData& bd, const NSState& guess,
                                              const NSOptions& opts = {});

// Vorticity (d_r(r u) - d_theta v)/r.
Field2D vorticity(const NSState& s);

// Seed a state from a composite approximation (pressure restricted to the
// interior nodes; G taken from the profile).
NSState seed_from_composite(const CompositeSolution& comp, double G);

// Interpolate a state onto a new radial grid (same theta grid).
NSState regrid(const NSState& s, std::shared_ptr<const Grid1D> radial);

// Resolution policy for the NS grid at viscosity parameter eps.
int ns_radial_points(double eps);

// Exact rotating-shear state u = a r + b/r + c r ln r, v = 0, with the
// matching radial pressure and azimuthal gradient G = 2 c eps^2.
NSState shear_state(const ShearProfile& prof, double eps, std::shared_ptr<const ThetaGrid> theta,
                    std::shared_ptr<const Grid1D> radial);

struct ContinuationResult {
  std::vector<NSState> states;
  std::vector<NewtonReport> reports;
  std::vector<double> seed_residuals;      // chosen seed's initial residual
  std::vector<bool> warm_start_used;
};

// Solve along a descending list of eps values; each solve is seeded by the
// previous solution (re-interpolated) or by the composite at that eps,
// whichever has the smaller initial residual.
ContinuationResult continuation(const std::vector<double>& epsilons, const Expansion& ex, int K,
                                const NSOptions& opts = {});

}  // namespace pbflow
