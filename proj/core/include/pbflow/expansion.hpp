#pragma once

#include "pbflow/euler_lin.hpp"
#include "pbflow/prandtl_lin.hpp"

namespace pbflow {

struct ExpansionOptions {
  int n_theta = 32;
  int n_radial = 64;
  int n_psi = 64;
  int n_layer = 64;
  double psi_depth = 0.0;  // 0: automatic
  double stretch = 1.5;
  double fp_tol = 1e-10;
  int fp_max_iter = 50;
  double gamma = 1e-5;
  bool gamma_crosscheck = true;
  double gamma_check_tol = 1e-5;
  int K = 1;  // highest boundary-layer correction order (0..3)
};

// Everything computed at one wall.
struct WallExpansion {
  WallSide side = WallSide::outer;
  double U_wall = 0.0;
  double kappa = 1.0;
  VonMisesField vm;
  PrandtlLeading lead;
  std::vector<BoundaryLayerOrder> orders;  // index k-1 for order k = 1..K
  LayerStage stage;                        // final known-field state (for tests)
};

struct ExpansionDiagnostics {
  std::vector<double> solvability;          // zero-mode diagnostics per Euler stage
  double g2_measured = 0.0;                 // order-2 azimuthal pressure gradient
  double g2_expected = 0.0;                 // 2 delta c~
  std::vector<double> forcing_far_fraction; // decay monitor of each assembled forcing
  std::vector<double> linearized_residuals; // order-k equation residual per solve
  std::vector<double> pek_residuals;
};

// The full matched-asymptotic state for one (boundary data, profile) pair.
// Everything here is independent of epsilon.
struct Expansion {
  BoundaryData bd;
  ShearProfile prof;
  ExpansionOptions opt;
  std::shared_ptr<const ThetaGrid> theta;
  std::shared_ptr<const Grid1D> radial;
  CutoffChi chi{0.5};
  WallExpansion outer, inner;
  std::vector<EulerOrder> euler;  // orders 1..K, fully corrected (tilde) fields
  Vector a1_corrector;            // A_1(r) on the radial grid (K >= 2)
  ExpansionDiagnostics diag;

  const WallExpansion& wall(WallSide s) const { return s == WallSide::outer ? outer : inner; }
};

Expansion build_expansion(const BoundaryData& bd, const ShearProfile& prof,
                          const ExpansionOptions& opt = {});

// Wall trace of d_r^m applied to an annulus field.
Vector euler_trace(const Field2D& f, WallSide side, int m);

}  // namespace pbflow
