#include "pbflow/expansion.hpp"

#include <cmath>

namespace pbflow {

Vector euler_trace(const Field2D& f, WallSide side, int m) {
  const int col = (side == WallSide::outer) ? f.n_radial() - 1 : 0;
  if (m == 0) return f.v.col(col);
  return d_radial(f, m).v.col(col);
}

namespace {

// Fill the Euler-trace tables of a stage for one order from annulus fields.
void set_traces(LayerStage& st, int order, const Field2D& u, const Field2D& v, const Field2D& p) {
  const int depth = 4 - order;
  for (int m = 0; m <= depth; ++m) {
    st.tr_u[order][m] = euler_trace(u, st.side, m);
    st.tr_v[order][m] = euler_trace(v, st.side, m);
    st.tr_p[order][m] = euler_trace(p, st.side, m);
  }
}

// Base-flow traces (analytic derivatives of the shear profile and its
// pressure), constant in theta.
void set_base_traces(LayerStage& st, const ShearProfile& prof) {
  const double rw = st.wall_r;
  const int nt = st.theta->size();
  auto cvec = [nt](double x) { return Vector::Constant(nt, x); };
  st.tr_u[0][0] = cvec(prof.u(rw));
  st.tr_u[0][1] = cvec(prof.du(rw));
  st.tr_u[0][2] = cvec(prof.d2u(rw));
  st.tr_u[0][3] = cvec(prof.d3u(rw));
  st.tr_u[0][4] = cvec(prof.d4u(rw));
  st.tr_p[0][0] = cvec(0.0);  // constant level never enters
  for (int m = 1; m <= 4; ++m) st.tr_p[0][m] = cvec(prof.dpe(rw, m));
}

struct WallWork {
  WallExpansion wx;
  LinearizedProblem base_pb;  // coefficient fields reused at
                              // every order (forcing / trace / v_prev swapped)
};

}  // namespace

Expansion build_expansion(const BoundaryData& bd, const ShearProfile& prof,
                          const ExpansionOptions& opt) {
  bd.validate();
  if (opt.K < 0 || opt.K > 3) throw InvalidArgument("build_expansion: K in 0..3");

  Expansion ex;
  ex.bd = bd;
  ex.prof = prof;
  ex.opt = opt;
  ex.theta = std::make_shared<const ThetaGrid>(opt.n_theta);
  ex.radial = Grid1D::radial(bd.r0, opt.n_radial);
  ex.chi = CutoffChi(bd.r0);

  const WallSpeeds ws = wall_speeds(bd);

  // ---- leading order at both walls -------------------------------------
  auto solve_wall0 = [&](WallSide side) {
    WallWork w;
    w.wx.side = side;
    w.wx.U_wall = (side == WallSide::outer) ? ws.outer : ws.inner;
    w.wx.kappa = (side == WallSide::outer) ? 1.0 : bd.r0;
    FixedPointOptions fpo;
    fpo.tol = opt.fp_tol;
    fpo.max_iter = opt.fp_max_iter;
    fpo.n_psi = opt.n_psi;
    fpo.psi_depth = opt.psi_depth;
    fpo.stretch = opt.stretch;
    fpo.theta = ex.theta;
    w.wx.vm = fixed_point(bd, side, w.wx.U_wall, fpo);
    ToPhysicalOptions tpo;
    tpo.n_layer = opt.n_layer;
    tpo.stretch = opt.stretch;
    w.wx.lead = to_physical(w.wx.vm, tpo);

    LayerStage& st = w.wx.stage;
    st.side = side;
    st.wall_r = (side == WallSide::outer) ? 1.0 : bd.r0;
    st.theta = ex.theta;
    st.layer = w.wx.lead.layer;
    st.u_p[0] = w.wx.lead.u_p0;
    st.v_p[1] = w.wx.lead.v_p1;
    st.p_p[1] = w.wx.lead.p_p1;
    set_base_traces(st, prof);

    LinearizedProblem& pb = w.base_pb;
    pb.side = side;
    pb.kappa = w.wx.kappa;
    pb.U_wall = w.wx.U_wall;
    pb.u_base = w.wx.lead.u_p0;
    pb.u_base.v.array() += w.wx.U_wall;
    pb.du0_layer = d_radial(w.wx.lead.u_p0);
    pb.du0_theta = d_theta(w.wx.lead.u_p0);
    return w;
  };
  WallWork wo = solve_wall0(WallSide::outer);
  WallWork wi = solve_wall0(WallSide::inner);

  LinearizedOptions lopts;
  lopts.gamma = opt.gamma;
  lopts.gamma_crosscheck = opt.gamma_crosscheck;
  lopts.gamma_check_tol = opt.gamma_check_tol;

  const double source2 = 2.0 * prof.delta * prof.c_t;

  // boundary traces of the order-k layer normal velocities feeding the Euler
  // solves
  auto v_wall_traces = [&](int k) {
    Vector bo, bi;
    if (k == 1) {
      bo = -wo.wx.lead.v_p1_wall;
      bi = -wi.wx.lead.v_p1_wall;
    } else {
      const auto& oo = wo.wx.orders[k - 2];
      const auto& oi = wi.wx.orders[k - 2];
      bo = -oo.v_pk1.v.col(oo.v_pk1.grid->wall_index());
      bi = -oi.v_pk1.v.col(oi.v_pk1.grid->wall_index());
    }
    return std::pair<Vector, Vector>(bo, bi);
  };

  // one linearized-Prandtl stage at one wall
  auto prandtl_stage = [&](WallWork& w, int k, const Field2D& u_ek, const Field2D& v_ek,
                           const Field2D& p_ek) {
    LayerStage& st = w.wx.stage;
    set_traces(st, k, u_ek, v_ek, p_ek);
    ForcingField fk = assemble_forcing(st, k, true);
    ex.diag.forcing_far_fraction.push_back(fk.far_fraction);

    LinearizedProblem pb = w.base_pb;
    pb.forcing = fk.values;
    pb.wall_trace = euler_trace(u_ek, st.side, 0);
    // v_base = v_e^{(1)} wall trace + v_p^{(1)}
    pb.v_base = w.wx.lead.v_p1;
    {
      const Vector ve1 = *w.wx.stage.tr_v[1][0];
      for (int j = 0; j < pb.v_base.n_radial(); ++j) pb.v_base.v.col(j) += ve1;
    }
    pb.v_prev = (k == 1) ? w.wx.lead.v_p1 : w.wx.orders[k - 2].v_pk1;

    BoundaryLayerOrder ord = solve_linearized(pb, k, lopts);
    // a stage at the numerical noise floor is exactly zero (keeps later
    // stages from differentiating noise-amplitude cutoff blends)
    if (norm_max(ord.u_pk) < 1e-9 * std::max(1.0, w.wx.U_wall)) {
      ord.u_pk.v.setZero();
      ord.A_inf = 0.0;
    }
    ord.v_pk1 = recover_v(ord.u_pk, pb.v_prev, w.wx.kappa, /*wall_anchored=*/k == 3);
    // un-regularized equation residual per unit forcing scale
    ex.diag.linearized_residuals.push_back(linearized_residual(pb, ord) /
                                           std::max(1.0, norm_max(pb.forcing)));
    w.wx.orders.push_back(ord);

    // expansion bookkeeping: the next orders see the far-field-subtracted field
    Field2D ut = ord.u_pk;
    ut.v.array() -= ord.A_inf;
    st.u_p[k] = ut;
    st.v_p[k + 1] = ord.v_pk1;
  };

  // pressure stage: g_k jet, p_p^{(k+1)}
  auto pressure_stage = [&](WallWork& w, int k, const Field2D& u_ek, const Field2D& v_ek,
                            const Field2D& p_ek) {
    LayerStage& st = w.wx.stage;
    set_traces(st, k, u_ek, v_ek, p_ek);  // post-blend traces
    ForcingField gk = assemble_forcing(st, k, false);
    ex.diag.forcing_far_fraction.push_back(gk.far_fraction);
    Field2D p_next = pressure_integrate(st.side, k + 1, gk, w.wx.kappa);
    st.p_p[k + 1] = p_next;
    w.wx.orders[k - 1].p_pk1 = p_next;
  };

  if (opt.K >= 1) {
    // ---- order-1 Euler (pre-blend) -------------------------------------
    auto [bo1, bi1] = v_wall_traces(1);
    Field2D v1 = solve_vek_homogeneous(ex.theta, ex.radial, bo1, bi1, prof);
    Field2D u1 = uek_from_continuity(v1, ex.chi, 0.0, 0.0);
    Field2D zero(ex.theta, ex.radial);
    PressureResult p1 = pek_construct(1, u1, v1, zero, zero, 0.0, prof);
    ex.diag.pek_residuals.push_back(std::max(p1.residual_u, p1.residual_v));

    prandtl_stage(wo, 1, u1, v1, p1.p);
    prandtl_stage(wi, 1, u1, v1, p1.p);

    // ---- blend the order-1 zero mode ------------------------------------
    const double a1o = wo.wx.orders[0].A_inf, a1i = wi.wx.orders[0].A_inf;
    Field2D u1b = uek_from_continuity(v1, ex.chi, a1o, a1i);
    PressureResult p1b = pek_construct(1, u1b, v1, zero, zero, 0.0, prof);

    pressure_stage(wo, 1, u1b, v1, p1b.p);
    pressure_stage(wi, 1, u1b, v1, p1b.p);

    EulerOrder e1;
    e1.k = 1;
    e1.u = u1b;
    e1.v = v1;
    e1.p = p1b.p;
    e1.p_theta_gradient = p1b.theta_gradient;
    e1.A_blend_outer = a1o;
    e1.A_blend_inner = a1i;
    ex.euler.push_back(e1);

    if (opt.K >= 2) {
      // ---- first order-2 solve, then the radial corrector ----------------
      QuadForcings q2a = euler_quad_forcings(u1b, v1);
      ex.diag.solvability.push_back(solvability_check(q2a.f));
      auto [bo2, bi2] = v_wall_traces(2);
      Field2D rhs2a = curl_rhs(q2a.f, q2a.g, source2, prof);
      Field2D v2a = solve_vek(rhs2a, bo2, bi2, prof);
      Field2D u2a = uek_from_continuity(v2a, ex.chi, 0.0, 0.0);

      // A_1 right side: (1/2pi) oint [v1 d_r(r u2a) + v2a d_r(r u1b)
      //                               - (r u1b_rr + u1b_r - u1b/r)] dtheta
      Vector a1rhs;
      {
        auto radmul = [&](const Field2D& f) {
          Field2D g = f;
          for (int j = 0; j < g.n_radial(); ++j) g.v.col(j) *= g.grid->node(j);
          return g;
        };
        Field2D t1 = multiply(v1, d_radial(radmul(u2a)));
        Field2D t2 = multiply(v2a, d_radial(radmul(u1b)));
        Field2D visc = radmul(d_radial(u1b, 2)) + d_radial(u1b);
        for (int j = 0; j < visc.n_radial(); ++j)
          visc.v.col(j) -= u1b.v.col(j) / u1b.grid->node(j);
        a1rhs = mean_theta(t1 + t2 - visc);
      }
      ex.a1_corrector = corrector_A1(a1rhs, *ex.radial);

      Field2D u1t = u1b;
      for (int i = 0; i < u1t.n_theta(); ++i) u1t.v.row(i) += ex.a1_corrector.transpose();
      PressureResult p1t = pek_construct(1, u1t, v1, zero, zero, 0.0, prof);
      ex.euler[0].u = u1t;
      ex.euler[0].p = p1t.p;
      ex.euler[0].corrector = ex.a1_corrector;

      // ---- order-2 with the corrected order-1 pair ------------------------
      QuadForcings q2 = euler_quad_forcings(u1t, v1);
      ex.diag.solvability.push_back(solvability_check(q2.f));
      Field2D rhs2 = curl_rhs(q2.f, q2.g, source2, prof);
      Field2D v2 = solve_vek(rhs2, bo2, bi2, prof);
      Field2D u2 = uek_from_continuity(v2, ex.chi, 0.0, 0.0);
      PressureResult p2 = pek_construct(2, u2, v2, q2.f, q2.g, source2, prof);
      ex.diag.pek_residuals.push_back(std::max(p2.residual_u, p2.residual_v));
      ex.diag.g2_measured = p2.theta_gradient;
      ex.diag.g2_expected = source2;

      // refresh the order-1 traces (now tilde) before the order-2 stages
      set_traces(wo.wx.stage, 1, u1t, v1, p1t.p);
      set_traces(wi.wx.stage, 1, u1t, v1, p1t.p);

      prandtl_stage(wo, 2, u2, v2, p2.p);
      prandtl_stage(wi, 2, u2, v2, p2.p);

      const double a2o = wo.wx.orders[1].A_inf, a2i = wi.wx.orders[1].A_inf;
      Field2D u2b = uek_from_continuity(v2, ex.chi, a2o, a2i);
      PressureResult p2b = pek_construct(2, u2b, v2, q2.f, q2.g, source2, prof);

      pressure_stage(wo, 2, u2b, v2, p2b.p);
      pressure_stage(wi, 2, u2b, v2, p2b.p);

      EulerOrder e2;
      e2.k = 2;
      e2.u = u2b;
      e2.v = v2;
      e2.p = p2b.p;
      e2.p_theta_gradient = p2b.theta_gradient;
      e2.A_blend_outer = a2o;
      e2.A_blend_inner = a2i;
      ex.euler.push_back(e2);

      if (opt.K >= 3) {
        // ---- order 3 ------------------------------------------------------
        QuadForcings q3 = euler_third_forcings(u1t, v1, u2b, v2);
        ex.diag.solvability.push_back(solvability_check(q3.f));
        auto [bo3, bi3] = v_wall_traces(3);
        Field2D rhs3 = curl_rhs(q3.f, q3.g, 0.0, prof);
        Field2D v3 = solve_vek(rhs3, bo3, bi3, prof);
        Field2D u3 = uek_from_continuity(v3, ex.chi, 0.0, 0.0);
        PressureResult p3 = pek_construct(3, u3, v3, q3.f, q3.g, 0.0, prof);
        ex.diag.pek_residuals.push_back(std::max(p3.residual_u, p3.residual_v));

        prandtl_stage(wo, 3, u3, v3, p3.p);
        prandtl_stage(wi, 3, u3, v3, p3.p);

        // order-3 zero-mode blend, same recipe as the lower orders; applied
        // before the pressure stage so the g_3 assembly sees the final fields
        const double a3o = wo.wx.orders[2].A_inf, a3i = wi.wx.orders[2].A_inf;
        Field2D u3b = uek_from_continuity(v3, ex.chi, a3o, a3i);
        PressureResult p3b = pek_construct(3, u3b, v3, q3.f, q3.g, 0.0, prof);

        pressure_stage(wo, 3, u3b, v3, p3b.p);
        pressure_stage(wi, 3, u3b, v3, p3b.p);

        EulerOrder e3;
        e3.k = 3;
        e3.u = u3b;
        e3.v = v3;
        e3.p = p3b.p;
        e3.p_theta_gradient = p3b.theta_gradient;
        e3.A_blend_outer = a3o;
        e3.A_blend_inner = a3i;
        ex.euler.push_back(e3);
      }
    }
  }

  ex.outer = std::move(wo.wx);
  ex.inner = std::move(wi.wx);
  return ex;
}

}  // namespace pbflow
