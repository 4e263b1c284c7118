#pragma once

#include "pbflow/ns_solver.hpp"

namespace pbflow {

// Measured errors of one solved state against the leading-order description.
struct TheoremError {
  double sup_tangential = 0.0;  // sup |u - u_e - u_p0 - u^_p0|
  double sup_normal = 0.0;      // sup |v|
};

// Evaluates the leading-order comparison on the state's grid, interpolating
// both wall layers without cutoffs.
TheoremError theorem_error(const NSState& ns, const Expansion& ex);

// sup over the window [r1+margin, r2-margin] of
// |w - (2 delta c~ ln r + 2 a0 + 2 delta a~ + delta c~)|.
double vorticity_limit_error(const NSState& ns, const ShearProfile& prof, double r1, double r2);

// Least squares fit log y = slope log x + c.
struct OrderFit {
  double slope = 0.0;
  double log_constant = 0.0;
  double fit_residual = 0.0;
};
OrderFit order_fit(const std::vector<double>& xs, const std::vector<double>& ys);

// Relative variation of 2 pi r w'(r) over [r0+margin, 1-margin]; w and u_e are
// radial profiles on the grid. Throws if u_e changes sign in the window.
double pb_diagnostic(const Vector& w_profile, const Vector& ue_profile, const Grid1D& rad,
                     double margin = 0.05);

// Interior mean vorticity over the window (zero-mode, quadrature weighted).
double interior_mean_vorticity(const NSState& ns, double r1, double r2);

// Window average of (c~ ln r + a~ + c~/2), the per-delta derivative of the
// limiting vorticity law.
double family_target_coefficient(const ShearProfile& prof, const Grid1D& rad, double r1, double r2);

// One point of a parameter sweep.
struct SweepPoint {
  double epsilon = 0.0;
  double delta = 0.0;
  double sup_tangential = 0.0;
  double sup_normal = 0.0;
  double vorticity_error = 0.0;
  double interior_vorticity = 0.0;
  double pb_variation = 0.0;
  int newton_iterations = 0;
  double newton_residual = 0.0;
  double seed_residual = 0.0;
  bool warm_start = false;
  bool converged = false;
};

struct SweepReport {
  std::vector<SweepPoint> points;
  OrderFit tangential_fit;    // vs epsilon, converged points only
  double v_over_eps_min = 0.0, v_over_eps_max = 0.0;
};

// Theorem-1.1 epsilon sweep at fixed delta: solves each epsilon by
// continuation and measures every metric.
SweepReport epsilon_sweep(const std::vector<double>& epsilons, const Expansion& ex, int K,
                          const NSOptions& opts);

// Family sweep over delta at fixed epsilon.
struct FamilyReport {
  std::vector<SweepPoint> points;          // one per delta
  std::vector<std::vector<double>> pair_measured;  // vorticity differences
  std::vector<std::vector<double>> pair_target;
  double max_relative_mismatch = 0.0;
  bool monotone = false;
};
FamilyReport family_report(const std::vector<double>& deltas, double epsilon,
                           const BoundaryData& bd, double c_t, const ExpansionOptions& eopt,
                           const NSOptions& nopt);

}  // namespace pbflow
