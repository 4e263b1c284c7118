#include "pbflow/prandtl0.hpp"

#include <cmath>

namespace pbflow {

Vector wall_datum(const BoundaryData& bd, WallSide side, const ThetaGrid& th) {
  const Vector pert = (side == WallSide::outer) ? bd.eval_f(th) : bd.eval_g(th);
  const double mean_base = (side == WallSide::outer) ? bd.alpha : bd.beta;
  const double msq = (side == WallSide::outer) ? bd.mean_square_f() : bd.mean_square_g();
  Vector d(th.size());
  for (int i = 0; i < th.size(); ++i) {
    const double p = pert[i];
    d[i] = 2.0 * mean_base * bd.eta * p + bd.eta * bd.eta * p * p - bd.eta * bd.eta * msq;
  }
  return d;
}

Field2D heat_seed(const Vector& datum, double u_wall, double kappa,
                  std::shared_ptr<const ThetaGrid> theta, std::shared_ptr<const Grid1D> psi) {
  if (!(u_wall > 0.0) || !(kappa > 0.0)) throw InvalidArgument("heat_seed: need u_wall, kappa > 0");
  CVector modes = theta->to_modes(datum);
  if (std::abs(modes[0]) > 1e-12)
    throw InvalidArgument("heat_seed: wall datum has nonzero mean (" +
                          std::to_string(modes[0].real()) + ")");
  const double diffusivity = kappa * u_wall;
  Field2D q0(theta, psi);
  const int np = psi->size();
  CVector line(theta->n_half());
  for (int j = 0; j < np; ++j) {
    const double p = psi->node(j);
    line[0] = 0.0;
    for (int k = 1; k < theta->n_half(); ++k) {
      const double a = std::sqrt(k / (2.0 * diffusivity));
      line[k] = modes[k] * std::exp(Complex(a * p, a * p));  // e^{alpha_k psi}, alpha_k=a(1+i)
    }
    q0.v.col(j) = theta->from_modes(line);
  }
  return q0;
}

namespace {

// Per-mode two-point BVPs (ik - kappa U d^2/dpsi^2) Phi_k = ik Lambda_k with
// Dirichlet ends, prefactored once and reused across fixed-point iterations.
class LOperator {
 public:
  LOperator(double u_wall, double kappa, std::shared_ptr<const ThetaGrid> theta,
            std::shared_ptr<const Grid1D> psi)
      : theta_(std::move(theta)), psi_(std::move(psi)) {
    const int np = psi_->size();
    const double diff = kappa * u_wall;
    const Matrix& d2 = psi_->D2();
    for (int k = 1; k < theta_->n_half(); ++k) {
      CMatrix a = CMatrix::Zero(np, np);
      for (int r = 0; r < np; ++r) {
        for (int c = 0; c < np; ++c) a(r, c) = -diff * d2(r, c);
        a(r, r) += Complex(0.0, k);
      }
      a.row(0).setZero();
      a(0, 0) = 1.0;  // far end (psi = -L)
      a.row(np - 1).setZero();
      a(np - 1, np - 1) = 1.0;  // wall (psi = 0)
      lus_.emplace_back(a);
    }
  }

  Field2D apply(const Field2D& lambda) const {
    const int np = psi_->size();
    const int nh = theta_->n_half();
    std::vector<CVector> modes(np);
    for (int j = 0; j < np; ++j) modes[j] = theta_->to_modes(lambda.v.col(j));
    Field2D out(lambda.theta, lambda.grid);
    std::vector<CVector> sol(nh, CVector::Zero(np));
    for (int k = 1; k < nh; ++k) {
      CVector rhs(np);
      for (int j = 0; j < np; ++j) rhs[j] = Complex(0.0, k) * modes[j][k];
      rhs[0] = 0.0;
      rhs[np - 1] = 0.0;
      sol[k] = lus_[k - 1].solve(rhs);
    }
    CVector line(nh);
    for (int j = 0; j < np; ++j) {
      line[0] = 0.0;
      for (int k = 1; k < nh; ++k) line[k] = sol[k][j];
      out.v.col(j) = theta_->from_modes(line);
    }
    return out;
  }

 private:
  std::shared_ptr<const ThetaGrid> theta_;
  std::shared_ptr<const Grid1D> psi_;
  std::vector<Eigen::PartialPivLU<CMatrix>> lus_;
};

}  // namespace

Field2D apply_L(const Field2D& lambda, double u_wall, double kappa) {
  LOperator op(u_wall, kappa, lambda.theta, lambda.grid);
  return op.apply(lambda);
}

Field2D map_H(const Field2D& q, const Field2D& q0, double u_wall) {
  const double u2 = u_wall * u_wall;
  Field2D out = zeros_like(q);
  for (int i = 0; i < q.n_theta(); ++i) {
    for (int j = 0; j < q.n_radial(); ++j) {
      const double s = q.v(i, j) + q0.v(i, j);
      const double rad = s + u2;
      if (rad <= 0.0)
        throw SolverError("map_H: iterate left the admissible ball (U^2 = " +
                          std::to_string(rad) + " <= 0)");
      out.v(i, j) = s - 2.0 * u_wall * std::sqrt(rad) + 2.0 * u2;
    }
  }
  return out;
}

VonMisesField fixed_point(const BoundaryData& bd, WallSide side, double u_wall,
                          const FixedPointOptions& opts) {
  const double kappa = (side == WallSide::outer) ? 1.0 : bd.r0;
  auto theta = opts.theta;
  if (!theta) {
    int n = 0;
    for (const auto& m : (side == WallSide::outer ? bd.f_modes : bd.g_modes))
      n = std::max(n, m.k);
    theta = std::make_shared<const ThetaGrid>(std::max(32, 4 * n));
  }
  // depth: default chosen from the decay rate of the slowest heat-seed mode.
  // rate*L ~ 27 keeps the far tails of the higher-order solutions (which carry
  // polynomial-in-Y factors) below the far-field uniformity tolerance.
  double depth = opts.psi_depth;
  if (depth <= 0.0) {
    const double rate = std::sqrt(1.0 / (2.0 * kappa * u_wall));
    depth = std::max(40.0 / std::sqrt(u_wall), 27.0 / rate);
  }
  auto psi = Grid1D::layer(WallSide::outer, depth, opts.n_psi, opts.stretch);

  // admissibility: the prescribed wall speed must stay positive, otherwise
  // the transform silently takes the wrong square-root branch
  {
    const Vector pert = (side == WallSide::outer) ? bd.eval_f(*theta) : bd.eval_g(*theta);
    const double base = (side == WallSide::outer) ? bd.alpha : bd.beta;
    const double wmin = base + bd.eta * pert.minCoeff();
    if (wmin <= 0.0)
      throw SolverError("fixed_point: prescribed wall speed is not positive (min " +
                        std::to_string(wmin) + "); eta too large");
  }

  const Vector datum = wall_datum(bd, side, *theta);
  Field2D q0 = heat_seed(datum, u_wall, kappa, theta, psi);
  LOperator lop(u_wall, kappa, theta, psi);

  VonMisesField vm;
  vm.side = side;
  vm.theta = theta;
  vm.psi = psi;
  vm.U_wall = u_wall;
  vm.kappa = kappa;

  Field2D q_rem(theta, psi);  // iteration remainder, starts at zero
  double prev_delta = -1.0;
  int bad_ratio_streak = 0;
  bool converged = false;
  for (int it = 1; it <= opts.max_iter; ++it) {
    Field2D next = lop.apply(map_H(q_rem, q0, u_wall));
    const double delta = norm_l2(next - q_rem);
    q_rem = next;
    vm.iterations = it;
    if (prev_delta > 0.0) {
      const double ratio = delta / prev_delta;
      vm.contraction_ratios.push_back(ratio);
      bad_ratio_streak = (ratio >= 1.0) ? bad_ratio_streak + 1 : 0;
      if (bad_ratio_streak >= 2)
        throw SolverError("fixed_point: iteration is not contracting (eta too large)");
    }
    prev_delta = std::max(delta, 1e-300);
    if (delta < opts.tol) {
      converged = true;
      break;
    }
  }
  if (!converged) throw SolverError("fixed_point: no convergence within max_iter");

  vm.Q = q_rem + q0;
  vm.U = zeros_like(vm.Q);
  for (int i = 0; i < vm.Q.n_theta(); ++i)
    for (int j = 0; j < vm.Q.n_radial(); ++j) {
      const double rad = vm.Q.v(i, j) + u_wall * u_wall;
      if (rad <= 0.0) throw SolverError("fixed_point: converged U^2 not positive");
      vm.U.v(i, j) = std::sqrt(rad);
    }
  return vm;
}

double von_mises_residual(const VonMisesField& vm) {
  Field2D usq = multiply(vm.U, vm.U);
  Field2D res = 2.0 * d_theta(vm.U) - vm.kappa * d_radial(usq, 2);
  // boundary rows carry no equation; mask wall and far nodes
  res.v.col(vm.psi->wall_index()).setZero();
  res.v.col(vm.psi->far_index()).setZero();
  return norm_l2(res);
}

PrandtlLeading to_physical(const VonMisesField& vm, const ToPhysicalOptions& opts) {
  const int nt = vm.theta->size();

  // Y(theta, psi) = int_0^psi ds / U  (canonical frame, negative values)
  Field2D inv_u = zeros_like(vm.U);
  inv_u.v = vm.U.v.cwiseInverse();
  Field2D y_st = zeros_like(vm.U);
  y_st.v = inv_u.v * vm.psi->cumulative_from_wall().transpose();

  // Shallowest transformed depth over theta determines the physical grid.
  double depth = std::numeric_limits<double>::infinity();
  const int far = vm.psi->far_index();
  for (int i = 0; i < nt; ++i) depth = std::min(depth, -y_st.v(i, far));
  depth *= (1.0 - 1e-12);

  PrandtlLeading pl;
  pl.side = vm.side;
  pl.theta = vm.theta;
  pl.U_wall = vm.U_wall;
  pl.kappa = vm.kappa;
  pl.layer = Grid1D::layer(vm.side, depth, opts.n_layer, opts.stretch);

  pl.u_p0 = Field2D(vm.theta, pl.layer);
  for (int i = 0; i < nt; ++i) {
    // spectral interpolants of Y(theta_i, .) and U(theta_i, .) in psi
    const Eigen::RowVectorXd yrow = y_st.v.row(i);
    const Eigen::RowVectorXd urow = vm.U.v.row(i);
    for (int j = 0; j < pl.layer->size(); ++j) {
      const double ycan = (vm.side == WallSide::outer) ? pl.layer->node(j) : -pl.layer->node(j);
      // solve Y(psi*) = ycan by bisection; Y is increasing in psi
      double lo = vm.psi->span_min(), hi = vm.psi->span_max();
      for (int b = 0; b < 64; ++b) {
        const double mid = 0.5 * (lo + hi);
        const double val = vm.psi->interp_weights(mid).dot(yrow);
        if (val < ycan)
          lo = mid;
        else
          hi = mid;
      }
      const double pstar = 0.5 * (lo + hi);
      pl.u_p0.v(i, j) = vm.psi->interp_weights(pstar).dot(urow) - vm.U_wall;
    }
  }
  // wall trace exact by construction of the transform; enforce it to kill the
  // bisection roundoff at the wall node
  {
    const int wi = pl.layer->wall_index();
    for (int i = 0; i < nt; ++i)
      pl.u_p0.v(i, wi) = vm.U.v(i, vm.psi->wall_index()) - vm.U_wall;
  }

  // relative decay check, skipped when the layer amplitude is at roundoff
  const double scale = norm_max(pl.u_p0);
  if (scale > 1e-12 * vm.U_wall) {
    const double farval = pl.u_p0.v.col(pl.layer->far_index()).cwiseAbs().maxCoeff();
    if (farval > opts.decay_tol * scale)
      throw ConsistencyError("to_physical: u_p0 does not decay at the truncation depth");
  }

  // v from continuity with decay at the far end; p from the normal momentum.
  pl.v_p1 = -(1.0 / pl.kappa) * cumulative_layer_integral(d_theta(pl.u_p0), true, 1e30);
  Field2D psrc = zeros_like(pl.u_p0);
  psrc.v = (pl.u_p0.v.array().square() + 2.0 * pl.U_wall * pl.u_p0.v.array()) / pl.kappa;
  pl.p_p1 = cumulative_layer_integral(psrc, true, 1e30);
  pl.v_p1_wall = pl.v_p1.v.col(pl.layer->wall_index());
  return pl;
}

double prandtl_residual(const PrandtlLeading& pl) {
  const Field2D ut = d_theta(pl.u_p0);
  const Field2D ul = d_radial(pl.u_p0);
  const Field2D ull = d_radial(pl.u_p0, 2);
  Field2D res = zeros_like(pl.u_p0);
  const int wi = pl.layer->wall_index();
  for (int i = 0; i < pl.u_p0.n_theta(); ++i)
    for (int j = 0; j < pl.u_p0.n_radial(); ++j) {
      const double vdiff = pl.v_p1.v(i, j) - pl.v_p1.v(i, wi);
      res.v(i, j) = (pl.U_wall + pl.u_p0.v(i, j)) * ut.v(i, j) +
                    vdiff * pl.kappa * ul.v(i, j) - pl.kappa * ull.v(i, j);
    }
  res.v.col(pl.layer->wall_index()).setZero();
  res.v.col(pl.layer->far_index()).setZero();
  return norm_l2(res);
}

}  // namespace pbflow
