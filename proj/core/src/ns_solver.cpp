#include "pbflow/ns_solver.hpp"

#include <cmath>

namespace pbflow {

namespace {

// Extension of the interior-node pressure to the full grid: the polynomial
// through the interior values, evaluated everywhere (identity on interior
// rows). Barycentric weights for the interior subset are computed by direct
// products with running normalization.
Matrix pressure_extension(const Grid1D& rad) {
  const int nr = rad.size();
  const int ni = nr - 2;
  std::vector<double> x(ni);
  for (int j = 0; j < ni; ++j) x[j] = rad.node(j + 1);
  std::vector<double> w(ni, 1.0);
  for (int i = 0; i < ni; ++i) {
    double acc = 1.0;
    for (int j = 0; j < ni; ++j) {
      if (i == j) continue;
      acc *= (x[i] - x[j]);
      if (std::abs(acc) > 1e280) acc *= 1e-280;  // keep in range; common scale cancels
      if (std::abs(acc) < 1e-280) acc *= 1e280;
    }
    w[i] = 1.0 / acc;
  }
  // normalize to tame the arbitrary rescalings above: weights enter the
  // barycentric formula only through ratios
  double wmax = 0.0;
  for (double v : w) wmax = std::max(wmax, std::abs(v));
  for (double& v : w) v /= wmax;

  Matrix e = Matrix::Zero(nr, ni);
  for (int j = 0; j < nr; ++j) {
    if (j >= 1 && j <= nr - 2) {
      e(j, j - 1) = 1.0;
      continue;
    }
    const double xx = rad.node(j);
    double s = 0.0;
    Vector q(ni);
    for (int i = 0; i < ni; ++i) {
      q[i] = w[i] / (xx - x[i]);
      s += q[i];
    }
    e.row(j) = (q / s).transpose();
  }
  return e;
}

struct NSWork {
  int nt = 0, nr = 0, ni = 0, n = 0;
  Matrix E;  // nr x (nr-2)
  int offset_v = 0, offset_p = 0, offset_div = 0;

  explicit NSWork(const NSState& s) {
    nt = s.theta->size();
    nr = s.radial->size();
    ni = nr - 2;
    offset_v = nt * nr;
    offset_p = 2 * nt * nr;
    offset_div = offset_p;  // rows: div block sits where the p unknowns sit
    n = 2 * nt * nr + nt * ni + 1;
    E = pressure_extension(*s.radial);
  }
  int iu(int i, int j) const { return i + nt * j; }
  int iv(int i, int j) const { return offset_v + i + nt * j; }
  int ip(int i, int jint) const { return offset_p + i + nt * jint; }
  int ilam() const { return n - 1; }
};

}  // namespace

Field2D NSState::pressure_full() const {
  Field2D p(theta, radial);
  const Matrix e = pressure_extension(*radial);
  p.v = p_int * e.transpose();
  return p;
}

NSResidual ns_residual(const NSState& s) {
  const auto& rad = *s.radial;
  const int nt = s.u.n_theta();
  const int nr = s.u.n_radial();
  const double e2 = s.epsilon * s.epsilon;

  const Field2D p = s.pressure_full();
  const Field2D ut = d_theta(s.u), utt = d_theta(s.u, 2);
  const Field2D ur = d_radial(s.u), urr = d_radial(s.u, 2);
  const Field2D vt = d_theta(s.v), vtt = d_theta(s.v, 2);
  const Field2D vr = d_radial(s.v), vrr = d_radial(s.v, 2);
  const Field2D pt = d_theta(p), pr = d_radial(p);

  NSResidual res{zeros_like(s.u), zeros_like(s.u), zeros_like(s.u)};
  for (int i = 0; i < nt; ++i)
    for (int j = 0; j < nr; ++j) {
      const double r = rad.node(j);
      res.f_u.v(i, j) = s.u.v(i, j) * ut.v(i, j) + r * s.v.v(i, j) * ur.v(i, j) +
                        s.u.v(i, j) * s.v.v(i, j) + pt.v(i, j) + s.G -
                        e2 * (r * urr.v(i, j) + utt.v(i, j) / r + 2.0 * vt.v(i, j) / r +
                              ur.v(i, j) - s.u.v(i, j) / r);
      res.f_v.v(i, j) = s.u.v(i, j) * vt.v(i, j) + r * s.v.v(i, j) * vr.v(i, j) -
                        s.u.v(i, j) * s.u.v(i, j) + r * pr.v(i, j) -
                        e2 * (r * vrr.v(i, j) + vtt.v(i, j) / r - 2.0 * ut.v(i, j) / r +
                              vr.v(i, j) - s.v.v(i, j) / r);
      res.f_div.v(i, j) = ut.v(i, j) + r * vr.v(i, j) + s.v.v(i, j);
    }
  return res;
}

double ns_residual_norm(const NSState& s, const BoundaryData& bd) {
  const NSResidual res = ns_residual(s);
  const auto& rad = *s.radial;
  const int nt = s.u.n_theta();
  const int nr = s.u.n_radial();
  const double wt = s.theta->quad_weight();
  double acc = 0.0;
  for (int j = 1; j < nr - 1; ++j) {
    const double w = wt * rad.quad_weights()[j];
    for (int i = 0; i < nt; ++i) {
      const double fd = res.f_div.v(i, j) + s.lambda;
      acc += w * (res.f_u.v(i, j) * res.f_u.v(i, j) + res.f_v.v(i, j) * res.f_v.v(i, j) + fd * fd);
    }
  }
  const Vector f = bd.eval_f(*s.theta);
  const Vector g = bd.eval_g(*s.theta);
  for (int i = 0; i < nt; ++i) {
    const double bo = s.u.v(i, nr - 1) - (bd.alpha + bd.eta * f[i]);
    const double bi = s.u.v(i, 0) - (bd.beta + bd.eta * g[i]);
    acc += bo * bo + bi * bi + s.v.v(i, nr - 1) * s.v.v(i, nr - 1) + s.v.v(i, 0) * s.v.v(i, 0);
  }
  return std::sqrt(acc);
}

namespace {

Vector residual_vector(const NSState& s, const BoundaryData& bd, const NSWork& wk) {
  const NSResidual res = ns_residual(s);
  Vector F = Vector::Zero(wk.n);
  const Vector f = bd.eval_f(*s.theta);
  const Vector g = bd.eval_g(*s.theta);
  for (int j = 0; j < wk.nr; ++j)
    for (int i = 0; i < wk.nt; ++i) {
      if (j == 0) {
        F[wk.iu(i, j)] = s.u.v(i, 0) - (bd.beta + bd.eta * g[i]);
        F[wk.iv(i, j)] = s.v.v(i, 0);
      } else if (j == wk.nr - 1) {
        F[wk.iu(i, j)] = s.u.v(i, j) - (bd.alpha + bd.eta * f[i]);
        F[wk.iv(i, j)] = s.v.v(i, j);
      } else {
        F[wk.iu(i, j)] = res.f_u.v(i, j);
        F[wk.iv(i, j)] = res.f_v.v(i, j);
        F[wk.ip(i, j - 1)] = res.f_div.v(i, j) + s.lambda;
      }
    }
  double gauge = 0.0;
  for (int jint = 0; jint < wk.ni; ++jint)
    for (int i = 0; i < wk.nt; ++i) gauge += s.p_int(i, jint);
  F[wk.ilam()] = gauge;
  return F;
}

Matrix jacobian(const NSState& s, const NSWork& wk) {
  const auto& rad = *s.radial;
  const Matrix& dth = s.theta->diff(1);
  const Matrix& dth2 = s.theta->diff(2);
  const Matrix& dr = rad.D();
  const Matrix& dr2 = rad.D2();
  const Matrix de = dr * wk.E;  // pressure radial derivative at all nodes
  const double e2 = s.epsilon * s.epsilon;

  const Field2D ut = d_theta(s.u);
  const Field2D ur = d_radial(s.u);
  const Field2D vt = d_theta(s.v);
  const Field2D vr = d_radial(s.v);

  Matrix J = Matrix::Zero(wk.n, wk.n);
  for (int j = 0; j < wk.nr; ++j) {
    const double r = rad.node(j);
    const bool wall = (j == 0 || j == wk.nr - 1);
    for (int i = 0; i < wk.nt; ++i) {
      if (wall) {
        J(wk.iu(i, j), wk.iu(i, j)) = 1.0;
        J(wk.iv(i, j), wk.iv(i, j)) = 1.0;
        continue;
      }
      const int ru = wk.iu(i, j), rv = wk.iv(i, j), rd = wk.ip(i, j - 1);
      // --- tangential momentum row ---
      for (int ip2 = 0; ip2 < wk.nt; ++ip2) {
        J(ru, wk.iu(ip2, j)) += s.u.v(i, j) * dth(i, ip2) - e2 * dth2(i, ip2) / r;
        J(ru, wk.iv(ip2, j)) += -2.0 * e2 * dth(i, ip2) / r;
        J(ru, wk.ip(ip2, j - 1)) += dth(i, ip2);
      }
      for (int jp = 0; jp < wk.nr; ++jp)
        J(ru, wk.iu(i, jp)) += r * s.v.v(i, j) * dr(j, jp) - e2 * (r * dr2(j, jp) + dr(j, jp));
      J(ru, wk.iu(i, j)) += ut.v(i, j) + s.v.v(i, j) + e2 / r;
      J(ru, wk.iv(i, j)) += r * ur.v(i, j) + s.u.v(i, j);
      // --- normal momentum row ---
      for (int ip2 = 0; ip2 < wk.nt; ++ip2) {
        J(rv, wk.iv(ip2, j)) += s.u.v(i, j) * dth(i, ip2) - e2 * dth2(i, ip2) / r;
        J(rv, wk.iu(ip2, j)) += 2.0 * e2 * dth(i, ip2) / r;
      }
      for (int jp = 0; jp < wk.nr; ++jp)
        J(rv, wk.iv(i, jp)) += r * s.v.v(i, j) * dr(j, jp) - e2 * (r * dr2(j, jp) + dr(j, jp));
      for (int jint = 0; jint < wk.ni; ++jint) J(rv, wk.ip(i, jint)) += r * de(j, jint);
      J(rv, wk.iv(i, j)) += r * vr.v(i, j) + e2 / r;
      J(rv, wk.iu(i, j)) += vt.v(i, j) - 2.0 * s.u.v(i, j);
      // --- continuity row ---
      for (int ip2 = 0; ip2 < wk.nt; ++ip2) J(rd, wk.iu(ip2, j)) += dth(i, ip2);
      for (int jp = 0; jp < wk.nr; ++jp) J(rd, wk.iv(i, jp)) += r * dr(j, jp);
      J(rd, wk.iv(i, j)) += 1.0;
      J(rd, wk.ilam()) += 1.0;
    }
  }
  for (int jint = 0; jint < wk.ni; ++jint)
    for (int i = 0; i < wk.nt; ++i) J(wk.ilam(), wk.ip(i, jint)) = 1.0;
  return J;
}

void apply_step(NSState& s, const NSWork& wk, const Vector& dx, double step) {
  for (int j = 0; j < wk.nr; ++j)
    for (int i = 0; i < wk.nt; ++i) {
      s.u.v(i, j) -= step * dx[wk.iu(i, j)];
      s.v.v(i, j) -= step * dx[wk.iv(i, j)];
    }
  for (int jint = 0; jint < wk.ni; ++jint)
    for (int i = 0; i < wk.nt; ++i) s.p_int(i, jint) -= step * dx[wk.ip(i, jint)];
  s.lambda -= step * dx[wk.ilam()];
}

}  // namespace

std::pair<NSState, NewtonReport> newton_solve(const BoundaryData& bd, const NSState& guess,
                                              const NSOptions& opts) {
  NSState s = guess;
  const auto& rad = *s.radial;
  const int nr = rad.size();

  // layer resolution check
  int near_outer = 0, near_inner = 0;
  for (int j = 1; j < nr - 1; ++j) {
    if (1.0 - rad.node(j) <= s.epsilon) ++near_outer;
    if (rad.node(j) - rad.node(0) <= s.epsilon) ++near_inner;
  }
  if (near_outer < opts.min_wall_nodes || near_inner < opts.min_wall_nodes)
    throw SolverError("newton_solve: layer under-resolved (" + std::to_string(near_outer) + "/" +
                      std::to_string(near_inner) + " nodes within eps of the walls)");

  NSWork wk(s);
  NewtonReport rep;
  double norm = ns_residual_norm(s, bd);
  rep.residual_history.push_back(norm);
  while (true) {
    if (norm < opts.tol) {
      rep.converged = true;
      break;
    }
    if (rep.iterations >= opts.max_iter)
      throw SolverError("newton_solve: no convergence in " + std::to_string(opts.max_iter) +
                        " iterations (residual " + std::to_string(norm) + ")");
    Vector F = residual_vector(s, bd, wk);
    DenseLU lu(jacobian(s, wk));
    Vector dx = lu.solve(F);
    ++rep.iterations;
    double step = 1.0;
    NSState trial = s;
    apply_step(trial, wk, dx, step);
    double tnorm = ns_residual_norm(trial, bd);
    if (opts.line_search) {
      int halvings = 0;
      while (tnorm > norm && halvings < 5) {
        step *= 0.5;
        trial = s;
        apply_step(trial, wk, dx, step);
        tnorm = ns_residual_norm(trial, bd);
        ++halvings;
      }
    }
    s = std::move(trial);
    norm = tnorm;
    rep.residual_history.push_back(norm);
  }
  rep.final_residual = norm;
  return {std::move(s), std::move(rep)};
}

Field2D vorticity(const NSState& s) {
  Field2D ru = s.u;
  for (int j = 0; j < ru.n_radial(); ++j) ru.v.col(j) *= ru.grid->node(j);
  Field2D w = d_radial(ru) - d_theta(s.v);
  for (int j = 0; j < w.n_radial(); ++j) w.v.col(j) /= w.grid->node(j);
  return w;
}

NSState seed_from_composite(const CompositeSolution& comp, double G) {
  NSState s;
  s.epsilon = comp.epsilon;
  s.theta = comp.theta;
  s.radial = comp.radial;
  s.u = comp.u;
  s.v = comp.v;
  const int nr = comp.radial->size();
  s.p_int = comp.p.v.middleCols(1, nr - 2);
  s.G = G;
  return s;
}

NSState regrid(const NSState& s, std::shared_ptr<const Grid1D> radial) {
  NSState out;
  out.epsilon = s.epsilon;
  out.theta = s.theta;
  out.radial = radial;
  const int nr = radial->size();
  Matrix w(s.radial->size(), nr);
  for (int j = 0; j < nr; ++j) w.col(j) = s.radial->interp_weights(radial->node(j));
  out.u = Field2D(s.theta, radial, s.u.v * w);
  out.v = Field2D(s.theta, radial, s.v.v * w);
  Field2D p = s.pressure_full();
  Matrix pfull = p.v * w;
  out.p_int = pfull.middleCols(1, nr - 2);
  out.G = s.G;
  return out;
}

int ns_radial_points(double eps) {
  int n = static_cast<int>(std::ceil(10.5 / std::sqrt(eps)));
  n = std::max(44, n);
  if (n % 2 != 0) ++n;
  return n;
}

NSState shear_state(const ShearProfile& prof, double eps, std::shared_ptr<const ThetaGrid> theta,
                    std::shared_ptr<const Grid1D> radial) {
  NSState s;
  s.epsilon = eps;
  s.theta = theta;
  s.radial = radial;
  s.u = Field2D(theta, radial);
  s.v = Field2D(theta, radial);
  const int nr = radial->size();
  for (int j = 0; j < nr; ++j) s.u.v.col(j).setConstant(prof.u(radial->node(j)));
  const Vector pe = base_pressure_profile(prof, *radial);
  s.p_int = Matrix(theta->size(), nr - 2);
  for (int jint = 0; jint < nr - 2; ++jint) s.p_int.col(jint).setConstant(pe[jint + 1]);
  s.G = 2.0 * prof.cc() * eps * eps;
  return s;
}

ContinuationResult continuation(const std::vector<double>& epsilons, const Expansion& ex, int K,
                                const NSOptions& opts) {
  if (epsilons.empty()) throw InvalidArgument("continuation: empty eps list");
  for (std::size_t i = 1; i < epsilons.size(); ++i)
    if (epsilons[i] >= epsilons[i - 1])
      throw InvalidArgument("continuation: eps list must be strictly descending");

  ContinuationResult out;
  for (double eps : epsilons) {
    auto radial = Grid1D::radial(ex.bd.r0, ns_radial_points(eps));
    const double G = 2.0 * ex.prof.cc() * eps * eps;
    CompositeSolution comp = assemble(ex, K, eps, radial);
    NSState cold = seed_from_composite(comp, G);
    double cold_norm = ns_residual_norm(cold, ex.bd);

    NSState seed = cold;
    bool warm = false;
    double seed_norm = cold_norm;
    if (!out.states.empty()) {
      NSState prev = regrid(out.states.back(), radial);
      prev.epsilon = eps;
      prev.G = G;
      const double pn = ns_residual_norm(prev, ex.bd);
      if (pn < cold_norm) {
        seed = std::move(prev);
        seed_norm = pn;
        warm = true;
      }
    }
    out.seed_residuals.push_back(seed_norm);
    out.warm_start_used.push_back(warm);
    auto [state, rep] = newton_solve(ex.bd, seed, opts);
    out.states.push_back(std::move(state));
    out.reports.push_back(std::move(rep));
  }
  return out;
}

}  // namespace pbflow
