#include "pbflow/verify.hpp"

#include <cmath>
#include <memory>
#include <numbers>

namespace pbflow {

TheoremError theorem_error(const NSState& ns, const Expansion& ex) {
  const int nt = ns.theta->size();
  const int nr = ns.radial->size();
  if (nt != ex.theta->size()) throw InvalidArgument("theorem_error: theta grids differ");

  TheoremError te;
  // comparison field u_e + u_p0((r-1)/eps) + u^_p0((r-r0)/eps), no cutoffs
  Matrix cmp(nt, nr);
  for (int j = 0; j < nr; ++j) cmp.col(j).setConstant(ex.prof.u(ns.radial->node(j)));
  for (const WallSide side : {WallSide::outer, WallSide::inner}) {
    const auto& lead = ex.wall(side).lead;
    for (int j = 0; j < nr; ++j) {
      const double r = ns.radial->node(j);
      const double l = (side == WallSide::outer) ? (r - 1.0) / ns.epsilon
                                                 : (r - ex.bd.r0) / ns.epsilon;
      if (l < lead.layer->span_min() || l > lead.layer->span_max()) continue;  // decayed
      const Vector w = lead.layer->interp_weights(l);
      cmp.col(j) += lead.u_p0.v * w;
    }
  }
  te.sup_tangential = (ns.u.v - cmp).cwiseAbs().maxCoeff();
  te.sup_normal = ns.v.v.cwiseAbs().maxCoeff();
  return te;
}

double vorticity_limit_error(const NSState& ns, const ShearProfile& prof, double r1, double r2) {
  if (r1 <= prof.r0 || r2 >= 1.0 || r1 >= r2)
    throw InvalidArgument("vorticity_limit_error: window must be interior");
  const Field2D w = vorticity(ns);
  double sup = 0.0;
  for (int j = 0; j < ns.radial->size(); ++j) {
    const double r = ns.radial->node(j);
    if (r < r1 || r > r2) continue;
    const double target = prof.vorticity(r);
    for (int i = 0; i < ns.theta->size(); ++i)
      sup = std::max(sup, std::abs(w.v(i, j) - target));
  }
  return sup;
}

OrderFit order_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 3)
    throw InvalidArgument("order_fit: need at least 3 points");
  const int n = static_cast<int>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0))
      throw InvalidArgument("order_fit: inputs must be positive");
    const double lx = std::log(xs[i]), ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  OrderFit f;
  f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  f.log_constant = (sy - f.slope * sx) / n;
  double ss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = std::log(ys[i]) - (f.slope * std::log(xs[i]) + f.log_constant);
    ss += d * d;
  }
  f.fit_residual = std::sqrt(ss / n);
  return f;
}

double pb_diagnostic(const Vector& w_profile, const Vector& ue_profile, const Grid1D& rad,
                     double margin) {
  const int nr = rad.size();
  if (w_profile.size() != nr || ue_profile.size() != nr)
    throw InvalidArgument("pb_diagnostic: profile sizes must match the grid");
  // streamlines must be nested circles: u_e of one sign in the window
  bool pos = false, neg = false;
  for (int j = 0; j < nr; ++j) {
    const double r = rad.node(j);
    if (r < rad.node(0) + margin || r > rad.node(nr - 1) - margin) continue;
    if (ue_profile[j] > 0) pos = true;
    if (ue_profile[j] < 0) neg = true;
  }
  if (pos && neg) throw InvalidArgument("pb_diagnostic: u_e changes sign in the window");

  const Vector dw = rad.D() * w_profile;
  double vmin = 0, vmax = 0, vsum = 0;
  int count = 0;
  for (int j = 0; j < nr; ++j) {
    const double r = rad.node(j);
    if (r < rad.node(0) + margin || r > rad.node(nr - 1) - margin) continue;
    const double val = 2.0 * std::numbers::pi * r * dw[j];
    if (count == 0) {
      vmin = vmax = val;
    } else {
      vmin = std::min(vmin, val);
      vmax = std::max(vmax, val);
    }
    vsum += val;
    ++count;
  }
  if (count < 3) throw InvalidArgument("pb_diagnostic: window too narrow");
  const double mean = vsum / count;
  const double denom = std::max(std::abs(mean), 1e-300);
  return (vmax - vmin) / denom;
}

double interior_mean_vorticity(const NSState& ns, double r1, double r2) {
  const Field2D w = vorticity(ns);
  const Vector w0 = mean_theta(w);
  double acc = 0.0, wacc = 0.0;
  for (int j = 0; j < ns.radial->size(); ++j) {
    const double r = ns.radial->node(j);
    if (r < r1 || r > r2) continue;
    const double qw = ns.radial->quad_weights()[j];
    acc += qw * w0[j];
    wacc += qw;
  }
  if (wacc == 0.0) throw InvalidArgument("interior_mean_vorticity: empty window");
  return acc / wacc;
}

double family_target_coefficient(const ShearProfile& prof, const Grid1D& rad, double r1,
                                 double r2) {
  double acc = 0.0, wacc = 0.0;
  for (int j = 0; j < rad.size(); ++j) {
    const double r = rad.node(j);
    if (r < r1 || r > r2) continue;
    const double qw = rad.quad_weights()[j];
    acc += qw * (prof.c_t * std::log(r) + prof.a_t + 0.5 * prof.c_t);
    wacc += qw;
  }
  return acc / wacc;
}

SweepReport epsilon_sweep(const std::vector<double>& epsilons, const Expansion& ex, int K,
                          const NSOptions& opts) {
  SweepReport rep;
  const double r1 = ex.chi.r1, r2 = ex.chi.r2;
  ContinuationResult cont = continuation(epsilons, ex, K, opts);
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < cont.states.size(); ++i) {
    const NSState& s = cont.states[i];
    SweepPoint p;
    p.epsilon = s.epsilon;
    p.delta = ex.prof.delta;
    const TheoremError te = theorem_error(s, ex);
    p.sup_tangential = te.sup_tangential;
    p.sup_normal = te.sup_normal;
    p.vorticity_error = vorticity_limit_error(s, ex.prof, r1, r2);
    p.interior_vorticity = interior_mean_vorticity(s, r1, r2);
    {
      const Vector w0 = mean_theta(vorticity(s));
      Vector ue(s.radial->size());
      for (int j = 0; j < s.radial->size(); ++j) ue[j] = ex.prof.u(s.radial->node(j));
      p.pb_variation = pb_diagnostic(w0, ue, *s.radial);
    }
    p.newton_iterations = cont.reports[i].iterations;
    p.newton_residual = cont.reports[i].final_residual;
    p.seed_residual = cont.seed_residuals[i];
    p.warm_start = cont.warm_start_used[i];
    p.converged = cont.reports[i].converged;
    rep.points.push_back(p);
    if (p.converged) {
      xs.push_back(p.epsilon);
      ys.push_back(std::max(p.sup_tangential, 1e-300));
    }
  }
  if (xs.size() >= 3) rep.tangential_fit = order_fit(xs, ys);
  double vmin = 1e300, vmax = 0.0;
  for (const auto& p : rep.points) {
    if (!p.converged) continue;
    vmin = std::min(vmin, p.sup_normal / p.epsilon);
    vmax = std::max(vmax, p.sup_normal / p.epsilon);
  }
  rep.v_over_eps_min = vmin;
  rep.v_over_eps_max = vmax;
  return rep;
}

FamilyReport family_report(const std::vector<double>& deltas, double epsilon,
                           const BoundaryData& bd, double c_t, const ExpansionOptions& eopt,
                           const NSOptions& nopt) {
  if (deltas.empty()) throw InvalidArgument("family_report: empty delta list");
  FamilyReport rep;
  std::vector<NSState> states;
  std::vector<std::unique_ptr<Expansion>> storage;

  for (double d : deltas) {
    ShearProfile prof = make_shear_profile(bd, d, c_t);
    auto ex = std::make_unique<Expansion>(build_expansion(bd, prof, eopt));
    auto radial = Grid1D::radial(bd.r0, ns_radial_points(epsilon));
    CompositeSolution comp = assemble(*ex, eopt.K, epsilon, radial);
    NSState seed = seed_from_composite(comp, 2.0 * prof.cc() * epsilon * epsilon);
    auto [state, nrep] = newton_solve(bd, seed, nopt);

    SweepPoint p;
    p.epsilon = epsilon;
    p.delta = d;
    const double r1 = ex->chi.r1, r2 = ex->chi.r2;
    p.interior_vorticity = interior_mean_vorticity(state, r1, r2);
    p.vorticity_error = vorticity_limit_error(state, prof, r1, r2);
    p.newton_iterations = nrep.iterations;
    p.newton_residual = nrep.final_residual;
    p.converged = nrep.converged;
    rep.points.push_back(p);
    states.push_back(std::move(state));
    storage.push_back(std::move(ex));
  }

  const int n = static_cast<int>(deltas.size());
  rep.pair_measured.assign(n, std::vector<double>(n, 0.0));
  rep.pair_target.assign(n, std::vector<double>(n, 0.0));
  const Expansion& ex0 = *storage.front();
  const double coef = family_target_coefficient(storage.front()->prof, *states.front().radial,
                                                ex0.chi.r1, ex0.chi.r2);
  double max_rel = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      rep.pair_measured[a][b] =
          rep.points[a].interior_vorticity - rep.points[b].interior_vorticity;
      rep.pair_target[a][b] = 2.0 * (deltas[a] - deltas[b]) * coef;
      if (a != b && deltas[a] != deltas[b]) {
        const double rel = std::abs(rep.pair_measured[a][b] - rep.pair_target[a][b]) /
                           std::max(std::abs(rep.pair_target[a][b]), 1e-300);
        max_rel = std::max(max_rel, rel);
      }
    }
  rep.max_relative_mismatch = max_rel;

  // strict monotonicity in delta (direction set by the target coefficient)
  rep.monotone = true;
  for (int a = 0; a + 1 < n; ++a) {
    const double diff = rep.points[a + 1].interior_vorticity - rep.points[a].interior_vorticity;
    const double want = 2.0 * (deltas[a + 1] - deltas[a]) * coef;
    if (diff * want <= 0.0) rep.monotone = false;
  }
  return rep;
}

}  // namespace pbflow
