#include "pbflow/spectral.hpp"

#include <cmath>
#include <numbers>

namespace pbflow {

namespace {
constexpr double kPi = std::numbers::pi;
}

// ---------------------------------------------------------------------------
// ThetaGrid
// ---------------------------------------------------------------------------

ThetaGrid::ThetaGrid(int n_modes) : n_(n_modes) {
  if (n_ < 4 || n_ % 2 != 0) throw InvalidArgument("ThetaGrid: n_modes must be even and >= 4");
  nodes_.resize(n_);
  for (int i = 0; i < n_; ++i) nodes_[i] = 2.0 * kPi * i / n_;

  fwd_ = CMatrix(n_half(), n_);
  for (int k = 0; k < n_half(); ++k)
    for (int j = 0; j < n_; ++j)
      fwd_(k, j) = std::polar(1.0 / n_, -k * nodes_[j]);

  // Differentiation matrices synthesized through the transform pair so that
  // derivative and mode conventions agree exactly (odd derivatives kill the
  // Nyquist mode).
  auto build = [&](int order) {
    Matrix d(n_, n_);
    Vector e = Vector::Zero(n_);
    for (int j = 0; j < n_; ++j) {
      e.setZero();
      e[j] = 1.0;
      CVector m = to_modes(e);
      for (int k = 0; k < n_half(); ++k) {
        Complex ik(0.0, static_cast<double>(k));
        Complex fac = std::pow(ik, order);
        if (k == n_ / 2 && order % 2 == 1) fac = 0.0;  // Nyquist rule
        m[k] *= fac;
      }
      d.col(j) = from_modes(m);
    }
    return d;
  };
  d1_ = build(1);
  d2_ = build(2);
}

const Matrix& ThetaGrid::diff(int order) const {
  if (order == 1) return d1_;
  if (order == 2) return d2_;
  throw InvalidArgument("ThetaGrid::diff: cached orders are 1 and 2");
}

CVector ThetaGrid::to_modes(const Vector& line) const {
  if (line.size() != n_) throw InvalidArgument("ThetaGrid::to_modes: bad line length");
  return fwd_ * line;
}

Vector ThetaGrid::from_modes(const CVector& modes) const {
  if (modes.size() != n_half()) throw InvalidArgument("ThetaGrid::from_modes: bad mode count");
  Vector out(n_);
  for (int j = 0; j < n_; ++j) {
    double s = modes[0].real();
    for (int k = 1; k < n_ / 2; ++k) s += 2.0 * (modes[k] * std::polar(1.0, k * nodes_[j])).real();
    s += (modes[n_ / 2] * std::polar(1.0, (n_ / 2) * nodes_[j])).real();
    out[j] = s;
  }
  return out;
}

double ThetaGrid::quad_weight() const { return 2.0 * kPi / n_; }

// ---------------------------------------------------------------------------
// Grid1D
// ---------------------------------------------------------------------------

namespace {

// Clenshaw-Curtis weights for n+1 CGL points on [-1, 1], standard formula.
std::vector<double> clenshaw_curtis(int n) {
  std::vector<double> w(n + 1, 0.0);
  if (n == 0) {
    w[0] = 2.0;
    return w;
  }
  std::vector<double> theta(n + 1);
  for (int j = 0; j <= n; ++j) theta[j] = kPi * j / n;
  std::vector<double> v(n - 1, 1.0);
  if (n % 2 == 0) {
    w[0] = 1.0 / (n * n - 1.0);
    w[n] = w[0];
    for (int k = 1; k <= n / 2 - 1; ++k)
      for (int j = 1; j < n; ++j) v[j - 1] -= 2.0 * std::cos(2.0 * k * theta[j]) / (4.0 * k * k - 1.0);
    for (int j = 1; j < n; ++j) v[j - 1] -= std::cos(n * theta[j]) / (n * n - 1.0);
  } else {
    w[0] = 1.0 / (n * n);
    w[n] = w[0];
    for (int k = 1; k <= (n - 1) / 2; ++k)
      for (int j = 1; j < n; ++j) v[j - 1] -= 2.0 * std::cos(2.0 * k * theta[j]) / (4.0 * k * k - 1.0);
  }
  for (int j = 1; j < n; ++j) w[j] = 2.0 * v[j - 1] / n;
  return w;  // weights in theta_j order (x_j = cos(theta_j), descending x)
}

}  // namespace

void Grid1D::build(GridKind kind, const std::vector<double>& ref_x, const std::vector<double>& phys,
                   const std::vector<double>& dphys, const std::vector<double>& d2phys) {
  kind_ = kind;
  const int n = static_cast<int>(ref_x.size());
  ref_x_ = Eigen::Map<const Vector>(ref_x.data(), n);
  nodes_ = Eigen::Map<const Vector>(phys.data(), n);

  // Barycentric weights for CGL in ascending-x order: (-1)^j with halved ends.
  bary_w_ = Vector(n);
  for (int j = 0; j < n; ++j) bary_w_[j] = (j % 2 == 0) ? 1.0 : -1.0;
  bary_w_[0] *= 0.5;
  bary_w_[n - 1] *= 0.5;

  // Reference differentiation matrices: barycentric form with negative-sum
  // diagonals, node differences through the trig identity
  // x_i - x_j = 2 sin((i+j)a/2) sin((i-j)a/2), centro-symmetry averaging, and
  // extended-precision construction. The exact-solution regressions need the
  // corner rows well below the double-precision N^4 eps floor.
  using XMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  const int nn = n - 1;
  auto xdiff = [&](int i, int j) -> long double {
    const long double a = 3.141592653589793238462643383279502884L / nn;
    return 2.0L * std::sin(0.5L * (i + j) * a) * std::sin(0.5L * (i - j) * a);
  };
  XMatrix dref(n, n), d2ref(n, n);
  for (int i = 0; i < n; ++i) {
    long double diag = 0.0L;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      dref(i, j) = (static_cast<long double>(bary_w_[j]) / bary_w_[i]) / xdiff(i, j);
      diag -= dref(i, j);
    }
    dref(i, i) = diag;
  }
  {
    XMatrix flipped(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) flipped(i, j) = dref(n - 1 - i, n - 1 - j);
    dref = 0.5L * (dref - flipped);
    for (int i = 0; i < n; ++i) {
      long double diag = 0.0L;
      for (int j = 0; j < n; ++j)
        if (i != j) diag -= dref(i, j);
      dref(i, i) = diag;
    }
  }
  for (int i = 0; i < n; ++i) {
    long double diag = 0.0L;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      d2ref(i, j) = 2.0L * dref(i, j) * (dref(i, i) - 1.0L / xdiff(i, j));
      diag -= d2ref(i, j);
    }
    d2ref(i, i) = diag;
  }
  {
    XMatrix flipped(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) flipped(i, j) = d2ref(n - 1 - i, n - 1 - j);
    d2ref = 0.5L * (d2ref + flipped);
    for (int i = 0; i < n; ++i) {
      long double diag = 0.0L;
      for (int j = 0; j < n; ++j)
        if (i != j) diag -= d2ref(i, j);
      d2ref(i, i) = diag;
    }
  }

  // Chain rule to physical coordinates.
  d1x_ = XMatrix(n, n);
  d2x_ = XMatrix(n, n);
  for (int i = 0; i < n; ++i) {
    const long double mp = dphys[i], mpp = d2phys[i];
    d1x_.row(i) = dref.row(i) / mp;
    d2x_.row(i) = d2ref.row(i) / (mp * mp) - dref.row(i) * (mpp / (mp * mp * mp));
  }
  d1_ = d1x_.cast<double>();
  d2_ = d2x_.cast<double>();

  // Quadrature: Clenshaw-Curtis in reference, times |dphys/dx|.
  auto cc = clenshaw_curtis(n - 1);  // theta-ordered = descending x
  qw_ = Vector(n);
  for (int j = 0; j < n; ++j) qw_[j] = cc[n - 1 - j] * std::abs(dphys[j]);


  // Cumulative integral matrices via Chebyshev coefficient integration.
  // Values at nodes -> coefficients -> antiderivative coefficients -> values.
  Matrix t(n, n), text(n, n + 1);
  for (int j = 0; j < n; ++j) {
    const double th = std::acos(std::clamp(ref_x_[j], -1.0, 1.0));
    for (int k = 0; k <= n; ++k) {
      const double val = std::cos(k * th);
      if (k < n) t(j, k) = val;
      text(j, k) = val;
    }
  }
  Matrix coeffs_of_values = t.partialPivLu().solve(Matrix::Identity(n, n));
  // Antiderivative coefficient map: int T_0 = T_1, int T_1 = T_2/4 + c,
  // int T_k = T_{k+1}/(2(k+1)) - T_{k-1}/(2(k-1)) for k >= 2. Free constant
  // is fixed by the anchor subtraction below.
  Matrix q = Matrix::Zero(n + 1, n);
  q(1, 0) = 1.0;
  for (int k = 2; k <= n; ++k) q(k, k - 1) += 1.0 / (2.0 * k);
  for (int k = 1; k <= n; ++k)
    if (k + 1 <= n - 1) q(k, k + 1) -= 1.0 / (2.0 * k);
  Matrix s_ref = text * q * coeffs_of_values;  // antiderivative in x, arbitrary const
  Matrix s_phys = s_ref * Eigen::Map<const Vector>(dphys.data(), n).asDiagonal();

  auto anchored = [&](int row) {
    Matrix s = s_phys;
    Eigen::RowVectorXd anchor = s_phys.row(row);
    for (int i = 0; i < n; ++i) s.row(i) -= anchor;
    return s;
  };
  const bool wall_at_end = (kind == GridKind::layer_outer);
  cum_wall_ = anchored(wall_at_end ? n - 1 : 0);
  cum_far_ = anchored(wall_at_end ? 0 : n - 1);
}

std::shared_ptr<const Grid1D> Grid1D::radial(double r0, int n_points) {
  if (!(r0 > 0.0 && r0 < 1.0)) throw InvalidArgument("Grid1D::radial: r0 must be in (0,1)");
  if (n_points < 8) throw InvalidArgument("Grid1D::radial: too few points");
  const int n = n_points;
  std::vector<double> x(n), phys(n), dp(n), d2p(n);
  for (int j = 0; j < n; ++j) {
    x[j] = -std::cos(kPi * j / (n - 1));  // ascending
    phys[j] = r0 + 0.5 * (x[j] + 1.0) * (1.0 - r0);
    dp[j] = 0.5 * (1.0 - r0);
    d2p[j] = 0.0;
  }
  // endpoints exact
  phys[0] = r0;
  phys[n - 1] = 1.0;
  auto g = std::shared_ptr<Grid1D>(new Grid1D());
  g->build(GridKind::radial, x, phys, dp, d2p);
  g->ref_of_phys_a_ = r0;
  g->ref_of_phys_b_ = 1.0;
  return g;
}

std::shared_ptr<const Grid1D> Grid1D::layer(WallSide side, double depth, int n_points,
                                            double stretch) {
  if (depth <= 0.0) throw InvalidArgument("Grid1D::layer: depth must be positive");
  if (n_points < 8) throw InvalidArgument("Grid1D::layer: too few points");
  const int n = n_points;
  const double sg = stretch;
  std::vector<double> x(n), phys(n), dp(n), d2p(n);
  // u in [0,1] measures distance from the wall; algebraic stretch u -> Y.
  auto map_u = [&](double u) { return depth * u / ((1.0 + sg) - sg * u); };
  auto dmap_u = [&](double u) {
    const double den = (1.0 + sg) - sg * u;
    return depth * (1.0 + sg) / (den * den);
  };
  auto d2map_u = [&](double u) {
    const double den = (1.0 + sg) - sg * u;
    return 2.0 * depth * sg * (1.0 + sg) / (den * den * den);
  };
  for (int j = 0; j < n; ++j) {
    x[j] = -std::cos(kPi * j / (n - 1));
    if (side == WallSide::outer) {
      const double u = 0.5 * (1.0 - x[j]);  // wall (u=0) at x=+1
      phys[j] = -map_u(u);
      dp[j] = 0.5 * dmap_u(u);        // dY/dx = (-map)' * du/dx = (-dmap)(-1/2)
      d2p[j] = -0.25 * d2map_u(u);
    } else {
      const double u = 0.5 * (1.0 + x[j]);  // wall (u=0) at x=-1
      phys[j] = map_u(u);
      dp[j] = 0.5 * dmap_u(u);
      d2p[j] = 0.25 * d2map_u(u);
    }
  }
  if (side == WallSide::outer) {
    phys[n - 1] = 0.0;
    phys[0] = -depth;
  } else {
    phys[0] = 0.0;
    phys[n - 1] = depth;
  }
  auto g = std::shared_ptr<Grid1D>(new Grid1D());
  g->build(side == WallSide::outer ? GridKind::layer_outer : GridKind::layer_inner, x, phys, dp,
           d2p);
  g->stretch_ = sg;
  g->depth_ = depth;
  return g;
}

int Grid1D::wall_index() const {
  switch (kind_) {
    case GridKind::layer_outer: return size() - 1;
    case GridKind::layer_inner: return 0;
    default: throw InvalidArgument("Grid1D::wall_index: not a layer grid");
  }
}

int Grid1D::far_index() const {
  switch (kind_) {
    case GridKind::layer_outer: return 0;
    case GridKind::layer_inner: return size() - 1;
    default: throw InvalidArgument("Grid1D::far_index: not a layer grid");
  }
}

double Grid1D::phys_to_ref(double y) const {
  switch (kind_) {
    case GridKind::radial: {
      const double r0 = ref_of_phys_a_;
      return 2.0 * (y - r0) / (1.0 - r0) - 1.0;
    }
    case GridKind::layer_outer: {
      const double yh = std::clamp(-y / depth_, 0.0, 1.0);
      const double u = yh * (1.0 + stretch_) / (1.0 + stretch_ * yh);
      return 1.0 - 2.0 * u;
    }
    case GridKind::layer_inner: {
      const double zh = std::clamp(y / depth_, 0.0, 1.0);
      const double u = zh * (1.0 + stretch_) / (1.0 + stretch_ * zh);
      return 2.0 * u - 1.0;
    }
  }
  throw InvalidArgument("Grid1D::phys_to_ref: bad kind");
}

Vector Grid1D::interp_weights(double y) const {
  const int n = size();
  if (y < span_min() - 1e-12 || y > span_max() + 1e-12)
    throw InvalidArgument("Grid1D::interp_weights: point outside span");
  const double x = phys_to_ref(y);
  Vector w = Vector::Zero(n);
  for (int j = 0; j < n; ++j) {
    if (std::abs(x - ref_x_[j]) < 1e-14) {
      w[j] = 1.0;
      return w;
    }
  }
  double s = 0.0;
  for (int j = 0; j < n; ++j) {
    w[j] = bary_w_[j] / (x - ref_x_[j]);
    s += w[j];
  }
  w /= s;
  return w;
}

Vector Grid1D::interp_deriv_weights(double y) const {
  const int n = size();
  const double x = phys_to_ref(y);
  for (int j = 0; j < n; ++j) {
    if (std::abs(x - ref_x_[j]) < 1e-14) return d1_.row(j);
  }
  // derivative of the barycentric interpolant at a non-node point, in x
  Vector q(n);
  double s = 0.0, s2 = 0.0;
  for (int j = 0; j < n; ++j) {
    q[j] = bary_w_[j] / (x - ref_x_[j]);
    s += q[j];
    s2 += q[j] / (x - ref_x_[j]);
  }
  Vector w(n);
  for (int j = 0; j < n; ++j) w[j] = (-q[j] / (x - ref_x_[j]) + (s2 / s) * q[j]) / s;
  // chain rule: dy/dx at this x
  // recover m'(x) by differentiating the node map: interpolate nodes_ themselves
  double mp = 0.0;
  for (int j = 0; j < n; ++j) mp += w[j] * nodes_[j];
  // w currently approximates d/dx; mp = d(phys)/dx evaluated through the same
  // interpolant, exact for our smooth maps at these resolutions
  return w / mp;
}

// ---------------------------------------------------------------------------
// Field2D and operations
// ---------------------------------------------------------------------------

Field2D::Field2D(std::shared_ptr<const ThetaGrid> th, std::shared_ptr<const Grid1D> g)
    : theta(std::move(th)), grid(std::move(g)) {
  v = Matrix::Zero(theta->size(), grid->size());
}

Field2D::Field2D(std::shared_ptr<const ThetaGrid> th, std::shared_ptr<const Grid1D> g, Matrix values)
    : theta(std::move(th)), grid(std::move(g)), v(std::move(values)) {
  if (v.rows() != theta->size() || v.cols() != grid->size())
    throw InvalidArgument("Field2D: value dimensions do not match grids");
}

void Field2D::require_finite(const char* what) const {
  if (!v.allFinite()) throw ConsistencyError(std::string("non-finite values in ") + what);
}

Field2D d_theta(const Field2D& f, int order) {
  if (order <= 0) throw InvalidArgument("d_theta: order must be positive");
  Field2D out = f;
  int rem = order;
  while (rem >= 2) {
    out.v = f.theta->diff(2) * out.v;
    rem -= 2;
  }
  if (rem == 1) out.v = f.theta->diff(1) * out.v;
  return out;
}

Vector Grid1D::apply_deriv(const Vector& line, int order) const {
  const int n = size();
  Eigen::Matrix<long double, Eigen::Dynamic, 1> x = line.cast<long double>();
  int rem = order;
  while (rem >= 2) {
    x = d2x_ * x;
    rem -= 2;
  }
  if (rem == 1) x = d1x_ * x;
  return x.cast<double>();
}

Field2D d_radial(const Field2D& f, int order) {
  if (order <= 0) throw InvalidArgument("d_radial: order must be positive");
  Field2D out = f;
  for (int i = 0; i < f.n_theta(); ++i) {
    const Vector line = f.v.row(i).transpose();
    out.v.row(i) = f.grid->apply_deriv(line, order).transpose();
  }
  return out;
}

Vector mean_theta(const Field2D& f) { return f.v.colwise().mean().transpose(); }

Field2D cumulative_layer_integral(const Field2D& f, bool from_far_end, double decay_tol) {
  const auto kind = f.grid->kind();
  if (kind == GridKind::radial)
    throw InvalidArgument("cumulative_layer_integral: field is not on a layer grid");
  if (from_far_end) {
    // decay is checked relative to the field scale; fields at the numerical
    // noise floor are exempt
    const double scale = f.v.cwiseAbs().maxCoeff();
    if (scale > 1e-8) {
      const double far = f.v.col(f.grid->far_index()).cwiseAbs().maxCoeff();
      if (far > decay_tol * scale)
        throw ConsistencyError("cumulative_layer_integral: input does not decay at the far end (|far|=" +
                               std::to_string(far) + ", max=" + std::to_string(scale) + ")");
    }
  }
  const Matrix& s = from_far_end ? f.grid->cumulative_from_far() : f.grid->cumulative_from_wall();
  Field2D out = f;
  out.v = f.v * s.transpose();
  return out;
}

Field2D operator+(const Field2D& a, const Field2D& b) {
  Field2D out = a;
  out.v += b.v;
  return out;
}

Field2D operator-(const Field2D& a, const Field2D& b) {
  Field2D out = a;
  out.v -= b.v;
  return out;
}

Field2D operator*(double s, const Field2D& a) {
  Field2D out = a;
  out.v *= s;
  return out;
}

Field2D multiply(const Field2D& a, const Field2D& b) {
  Field2D out = a;
  out.v = a.v.cwiseProduct(b.v);
  return out;
}

Field2D broadcast_theta(const Field2D& like, const Vector& theta_line) {
  Field2D out = zeros_like(like);
  for (int j = 0; j < out.n_radial(); ++j) out.v.col(j) = theta_line;
  return out;
}

Field2D broadcast_radial(const Field2D& like, const Vector& radial_line) {
  Field2D out = zeros_like(like);
  for (int i = 0; i < out.n_theta(); ++i) out.v.row(i) = radial_line.transpose();
  return out;
}

Field2D zeros_like(const Field2D& like) { return Field2D(like.theta, like.grid); }

double norm_l2(const Field2D& f) {
  const double wt = f.theta->quad_weight();
  double acc = 0.0;
  for (int j = 0; j < f.n_radial(); ++j)
    acc += f.grid->quad_weights()[j] * wt * f.v.col(j).squaredNorm();
  return std::sqrt(acc);
}

double norm_max(const Field2D& f) { return f.v.cwiseAbs().maxCoeff(); }

double eval_line(const Field2D& f, int itheta, double x) {
  return f.grid->interp_weights(x).dot(f.v.row(itheta));
}

}  // namespace pbflow
