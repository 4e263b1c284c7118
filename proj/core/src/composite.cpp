#include "pbflow/composite.hpp"

#include <cmath>

namespace pbflow {

namespace {

// Samples layer fields (and their layer derivatives) at the annulus nodes
// through l = (r - wall)/eps, extending by the far-node value beyond the
// truncation depth.
struct LayerSampler {
  Matrix w;        // (n_layer x n_r) interpolation weights
  Matrix wd;       // same for d/dl
  Vector beyond;   // 1 where the node maps beyond the stored depth
  int far_index = 0;

  LayerSampler(const Grid1D& layer, const Grid1D& radial, WallSide side, double eps) {
    const int nl = layer.size();
    const int nr = radial.size();
    w = Matrix::Zero(nl, nr);
    wd = Matrix::Zero(nl, nr);
    beyond = Vector::Zero(nr);
    far_index = layer.far_index();
    for (int j = 0; j < nr; ++j) {
      const double r = radial.node(j);
      const double l = (side == WallSide::outer) ? (r - 1.0) / eps : (r - radial.node(0)) / eps;
      if (l < layer.span_min() || l > layer.span_max()) {
        beyond[j] = 1.0;
        continue;
      }
      w.col(j) = layer.interp_weights(l);
      wd.col(j) = layer.interp_deriv_weights(l);
    }
  }

  // field values at the annulus nodes
  Matrix sample(const Field2D& f) const {
    Matrix out = f.v * w;
    for (int j = 0; j < beyond.size(); ++j)
      if (beyond[j] != 0.0) out.col(j) = f.v.col(far_index);
    return out;
  }
  Matrix sample_dl(const Field2D& f) const {
    return f.v * wd;  // derivative vanishes beyond the depth (columns stay zero)
  }
};

Matrix interp_radial(const Field2D& f, const Grid1D& target) {
  const int nr = target.size();
  Matrix w(f.n_radial(), nr);
  for (int j = 0; j < nr; ++j) w.col(j) = f.grid->interp_weights(target.node(j));
  return f.v * w;
}

}  // namespace

Vector base_pressure_profile(const ShearProfile& prof, const Grid1D& radial) {
  const int nr = radial.size();
  Vector rhs(nr);
  for (int j = 0; j < nr; ++j) {
    const double r = radial.node(j);
    rhs[j] = prof.u(r) * prof.u(r) / r;
  }
  Matrix a = radial.D();
  a.row(0).setZero();
  a(0, 0) = 1.0;
  Vector b = rhs;
  b[0] = 0.0;
  return a.partialPivLu().solve(b);
}

CompositeSolution assemble(const Expansion& ex, int K, double eps,
                           std::shared_ptr<const Grid1D> radial) {
  if (K < 0 || K > ex.opt.K)
    throw InvalidArgument("assemble: requested K exceeds the built expansion order");
  if (!(eps > 0.0)) throw InvalidArgument("assemble: eps must be positive");
  if (!radial) radial = ex.radial;

  CompositeSolution c;
  c.K = K;
  c.epsilon = eps;
  c.theta = ex.theta;
  c.radial = radial;
  const int nt = ex.theta->size();
  const int nr = radial->size();

  // layer collision check: the half-width of each leading profile, scaled by
  // eps, must stay below half the annulus gap
  for (const WallSide side : {WallSide::outer, WallSide::inner}) {
    const auto& lead = ex.wall(side).lead;
    const double scale = norm_max(lead.u_p0);
    if (scale <= 0.0) continue;
    double half_width = lead.layer->span_max() - lead.layer->span_min();
    for (int j = 0; j < lead.layer->size(); ++j) {
      const int jj = (side == WallSide::outer) ? lead.layer->size() - 1 - j : j;
      if (lead.u_p0.v.col(jj).cwiseAbs().maxCoeff() < 0.5 * scale) {
        half_width = std::abs(lead.layer->node(jj));
        break;
      }
    }
    if (eps * half_width >= 0.5 * (1.0 - ex.bd.r0))
      throw InvalidArgument("assemble: eps too large, boundary layers collide (eps*halfwidth=" +
                            std::to_string(eps * half_width) + ")");
  }

  // ---- Euler part -------------------------------------------------------
  Matrix u_a(nt, nr), v_a(nt, nr), p_a(nt, nr);
  for (int i = 0; i < nt; ++i)
    for (int j = 0; j < nr; ++j) u_a(i, j) = ex.prof.u(radial->node(j));
  v_a.setZero();
  {
    const Vector pe = base_pressure_profile(ex.prof, *radial);
    for (int i = 0; i < nt; ++i) p_a.row(i) = pe.transpose();
  }
  double epow = 1.0;
  for (int k = 1; k <= K; ++k) {
    epow *= eps;
    const EulerOrder& e = ex.euler[k - 1];
    u_a += epow * interp_radial(e.u, *radial);
    v_a += epow * interp_radial(e.v, *radial);
    p_a += epow * interp_radial(e.p, *radial);
    if (k == 2) c.p_theta_gradient = epow * e.p_theta_gradient;
  }

  // ---- layer stacks -------------------------------------------------------
  // chi weights on the target radial grid
  Vector chi(nr), dchi(nr);
  for (int j = 0; j < nr; ++j) {
    chi[j] = ex.chi.chi(radial->node(j));
    dchi[j] = ex.chi.dchi(radial->node(j));
  }

  Matrix div_ing = Matrix::Zero(nt, nr);  // ingredient-level divergence
  Matrix k_src = Matrix::Zero(nt, nr);    // corrector source

  // Euler contribution to the ingredient divergence (d_theta u + d_r(rv))
  {
    Matrix dth_u = Matrix::Zero(nt, nr), drv = Matrix::Zero(nt, nr);
    double ep = 1.0;
    for (int k = 1; k <= K; ++k) {
      ep *= eps;
      const EulerOrder& e = ex.euler[k - 1];
      dth_u += ep * interp_radial(d_theta(e.u), *radial);
      Field2D rv = e.v;
      for (int j = 0; j < rv.n_radial(); ++j) rv.v.col(j) *= rv.grid->node(j);
      drv += ep * interp_radial(d_radial(rv), *radial);
    }
    div_ing += dth_u + drv;
  }

  for (const WallSide side : {WallSide::outer, WallSide::inner}) {
    const WallExpansion& wx = ex.wall(side);
    const LayerSampler smp(*wx.lead.layer, *radial, side, eps);
    const bool outer = (side == WallSide::outer);
    Vector cw(nr), dcw(nr);  // chi or (1-chi) weight and its derivative
    for (int j = 0; j < nr; ++j) {
      cw[j] = outer ? chi[j] : 1.0 - chi[j];
      dcw[j] = outer ? dchi[j] : -dchi[j];
    }

    // u-layers 0..K (far-field subtracted versions)
    std::vector<Field2D> ulay;
    ulay.push_back(wx.lead.u_p0);
    for (int k = 1; k <= K; ++k) {
      Field2D f = wx.orders[k - 1].u_pk;
      f.v.array() -= wx.orders[k - 1].A_inf;
      ulay.push_back(f);
    }
    // v-layers 1..K+1 with the top order anchored at the wall
    std::vector<Field2D> vlay;
    for (int k = 1; k <= K + 1; ++k) {
      Field2D f = (k == 1) ? wx.lead.v_p1 : wx.orders[k - 2].v_pk1;
      if (k == K + 1) {
        const Vector wallv = f.v.col(f.grid->wall_index());
        for (int j = 0; j < f.n_radial(); ++j) f.v.col(j) -= wallv;
      }
      vlay.push_back(f);
    }
    // p-layers 1..min(K+1, 4)
    std::vector<Field2D> play;
    play.push_back(wx.lead.p_p1);
    for (int k = 2; k <= std::min(K + 1, 4); ++k) {
      if (k - 2 < static_cast<int>(wx.orders.size()) && wx.orders[k - 2].p_pk1.theta)
        play.push_back(wx.orders[k - 2].p_pk1);
    }

    double ep = 1.0;
    for (int k = 0; k <= K; ++k) {
      const Matrix s = smp.sample(ulay[k]);
      for (int j = 0; j < nr; ++j) u_a.col(j) += ep * cw[j] * s.col(j);
      const Matrix st = smp.sample(d_theta(ulay[k]));
      for (int j = 0; j < nr; ++j) div_ing.col(j) += ep * cw[j] * st.col(j);
      ep *= eps;
    }
    ep = eps;
    for (int k = 1; k <= K + 1; ++k) {
      const Field2D& f = vlay[k - 1];
      const Matrix s = smp.sample(f);
      const Matrix sd = smp.sample_dl(f);
      for (int j = 0; j < nr; ++j) {
        const double r = radial->node(j);
        v_a.col(j) += ep * cw[j] * s.col(j);
        // d_r(r * cw * f(l)) = cw' r f + cw f + cw r f'/eps
        div_ing.col(j) += ep * (dcw[j] * r * s.col(j) + cw[j] * s.col(j)) +
                          ep / eps * cw[j] * r * sd.col(j);
        // corrector source: chi' piece for every order, bracket for the top
        k_src.col(j) += ep * dcw[j] * r * s.col(j);
        if (k == K + 1) {
          const double l = (side == WallSide::outer) ? (r - 1.0) / eps
                                                     : (r - ex.bd.r0) / eps;
          k_src.col(j) += ep * cw[j] * (l * sd.col(j) + s.col(j));
        }
      }
      ep *= eps;
    }
    ep = eps;
    for (std::size_t k = 0; k < play.size(); ++k) {
      const Matrix s = smp.sample(play[k]);
      for (int j = 0; j < nr; ++j) p_a.col(j) += ep * cw[j] * cw[j] * s.col(j);
      ep *= eps;
    }
  }

  // ---- corrector h --------------------------------------------------------
  const double scale_k = std::max(1e-300, k_src.cwiseAbs().maxCoeff());
  Field2D ksrc_f(ex.theta, radial, k_src);
  const Vector kzm = mean_theta(ksrc_f);
  if (kzm.cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, scale_k))
    throw ConsistencyError("assemble: corrector source has a nonzero angular mean (" +
                           std::to_string(kzm.cwiseAbs().maxCoeff()) + ")");
  c.h = Field2D(ex.theta, radial);
  {
    const int nh = ex.theta->n_half();
    CVector line(nh);
    const double epk1 = std::pow(eps, K + 1);
    for (int j = 0; j < nr; ++j) {
      const CVector m = ex.theta->to_modes(k_src.col(j));
      line[0] = 0.0;
      for (int n = 1; n < nh; ++n) line[n] = -m[n] / Complex(0.0, n) / epk1;
      c.h.v.col(j) = ex.theta->from_modes(line);
    }
    u_a += epk1 * c.h.v;
    div_ing += epk1 * d_theta(c.h).v;
  }

  c.u = Field2D(ex.theta, radial, u_a);
  c.v = Field2D(ex.theta, radial, v_a);
  c.p = Field2D(ex.theta, radial, p_a);
  c.div_ingredient = Field2D(ex.theta, radial, div_ing);
  c.min_u = c.u.v.minCoeff();

  // wall trace bookkeeping (exactness is part of the construction)
  {
    const Vector f = ex.bd.eval_f(*ex.theta);
    const Vector g = ex.bd.eval_g(*ex.theta);
    double err = 0.0;
    for (int i = 0; i < nt; ++i) {
      err = std::max(err, std::abs(c.u.v(i, nr - 1) - (ex.bd.alpha + ex.bd.eta * f[i])));
      err = std::max(err, std::abs(c.u.v(i, 0) - (ex.bd.beta + ex.bd.eta * g[i])));
      err = std::max(err, std::abs(c.v.v(i, nr - 1)));
      err = std::max(err, std::abs(c.v.v(i, 0)));
    }
    c.wall_trace_error = err;
  }
  return c;
}

ResidualReport residual(const CompositeSolution& comp) {
  const auto& rad = *comp.radial;
  const int nt = comp.u.n_theta();
  const int nr = comp.u.n_radial();
  const double e2 = comp.epsilon * comp.epsilon;

  const Field2D ut = d_theta(comp.u), utt = d_theta(comp.u, 2);
  const Field2D ur = d_radial(comp.u), urr = d_radial(comp.u, 2);
  const Field2D vt = d_theta(comp.v), vtt = d_theta(comp.v, 2);
  const Field2D vr = d_radial(comp.v), vrr = d_radial(comp.v, 2);
  const Field2D pt = d_theta(comp.p);
  const Field2D pr = d_radial(comp.p);

  Field2D ru = zeros_like(comp.u), rv = zeros_like(comp.u);
  for (int i = 0; i < nt; ++i)
    for (int j = 0; j < nr; ++j) {
      const double r = rad.node(j);
      ru.v(i, j) = comp.u.v(i, j) * ut.v(i, j) + r * comp.v.v(i, j) * ur.v(i, j) +
                   comp.u.v(i, j) * comp.v.v(i, j) + pt.v(i, j) + comp.p_theta_gradient -
                   e2 * (r * urr.v(i, j) + utt.v(i, j) / r + 2.0 * vt.v(i, j) / r + ur.v(i, j) -
                         comp.u.v(i, j) / r);
      rv.v(i, j) = comp.u.v(i, j) * vt.v(i, j) + r * comp.v.v(i, j) * vr.v(i, j) -
                   comp.u.v(i, j) * comp.u.v(i, j) + r * pr.v(i, j) -
                   e2 * (r * vrr.v(i, j) + vtt.v(i, j) / r - 2.0 * ut.v(i, j) / r + vr.v(i, j) -
                         comp.v.v(i, j) / r);
    }

  ResidualReport rep;
  rep.epsilon = comp.epsilon;
  rep.K = comp.K;
  rep.ru_l2 = norm_l2(ru);
  rep.ru_max = norm_max(ru);
  rep.rv_l2 = norm_l2(rv);
  rep.rv_max = norm_max(rv);
  rep.dtheta_ru_l2 = norm_l2(d_theta(ru));
  rep.dtheta_rv_l2 = norm_l2(d_theta(rv));
  return rep;
}

}  // namespace pbflow
