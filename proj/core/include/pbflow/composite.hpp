#pragma once

#include "pbflow/expansion.hpp"

namespace pbflow {

// Matched composite approximation on the annulus grid, exactly divergence
// free after the corrector and with exact wall traces by construction.
struct CompositeSolution {
  int K = 1;
  double epsilon = 0.1;
  std::shared_ptr<const ThetaGrid> theta;
  std::shared_ptr<const Grid1D> radial;
  Field2D u, v;
  Field2D p;                      // periodic part
  double p_theta_gradient = 0.0;  // constant d_theta p (order-2 multivalued part)
  Field2D h;                      // divergence corrector (included in u as eps^{K+1} h)
  Field2D div_ingredient;         // divergence assembled from ingredient derivatives
  double min_u = 0.0;
  double wall_trace_error = 0.0;  // max boundary mismatch before any rounding
};

// Assemble the order-K composite at viscosity parameter eps. A target radial
// grid may be supplied (defaults to the expansion grid).
CompositeSolution assemble(const Expansion& ex, int K, double eps,
                           std::shared_ptr<const Grid1D> radial = nullptr);

struct ResidualReport {
  double epsilon = 0.0;
  int K = 0;
  double ru_l2 = 0.0, ru_max = 0.0;
  double rv_l2 = 0.0, rv_max = 0.0;
  double dtheta_ru_l2 = 0.0, dtheta_rv_l2 = 0.0;
};

// Navier-Stokes residual of the composite, evaluated spectrally on its grid.
ResidualReport residual(const CompositeSolution& comp);

// Base pressure profile p_e(r) with p_e' = u_e^2/r, anchored at r0.
Vector base_pressure_profile(const ShearProfile& prof, const Grid1D& radial);

}  // namespace pbflow
