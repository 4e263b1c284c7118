#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pbflow/spectral.hpp"

using namespace pbflow;

namespace {

constexpr double kPi = std::numbers::pi;

Field2D theta_field(std::shared_ptr<const ThetaGrid> th, std::shared_ptr<const Grid1D> g,
                    double (*fn)(double)) {
  Field2D f(th, g);
  for (int i = 0; i < f.n_theta(); ++i)
    for (int j = 0; j < f.n_radial(); ++j) f.v(i, j) = fn(th->node(i));
  return f;
}

}  // namespace

TEST_CASE("d_theta: analytic trigonometric derivatives") {
  auto th = std::make_shared<const ThetaGrid>(32);
  auto rad = Grid1D::radial(0.5, 16);

  Field2D s = theta_field(th, rad, [](double t) { return std::sin(t); });
  Field2D ds = d_theta(s, 1);
  for (int i = 0; i < 32; ++i) CHECK(ds.v(i, 0) == doctest::Approx(std::cos(th->node(i))).epsilon(1e-12));

  Field2D c(th, rad);
  c.v.setConstant(3.7);
  CHECK(norm_max(d_theta(c, 1)) < 1e-12);

  Field2D c3 = theta_field(th, rad, [](double t) { return std::cos(3.0 * t); });
  Field2D d2 = d_theta(c3, 2);
  for (int i = 0; i < 32; ++i)
    CHECK(std::abs(d2.v(i, 0) + 9.0 * std::cos(3.0 * th->node(i))) < 1e-12);

  CHECK_THROWS_AS(d_theta(s, 0), InvalidArgument);
}

TEST_CASE("d_theta twice equals order 2 for resolved fields") {
  auto th = std::make_shared<const ThetaGrid>(32);
  auto rad = Grid1D::radial(0.5, 8);
  Field2D f(th, rad);
  for (int i = 0; i < f.n_theta(); ++i)
    for (int j = 0; j < f.n_radial(); ++j)
      f.v(i, j) = std::sin(th->node(i)) + 0.3 * std::cos(5.0 * th->node(i));
  Field2D a = d_theta(d_theta(f, 1), 1);
  Field2D b = d_theta(f, 2);
  CHECK(norm_max(a - b) < 1e-12);
}

TEST_CASE("mean_theta: zero modes and exact means") {
  auto th = std::make_shared<const ThetaGrid>(32);
  auto rad = Grid1D::radial(0.5, 8);
  Field2D c = theta_field(th, rad, [](double t) { return std::cos(t); });
  CHECK(mean_theta(c).cwiseAbs().maxCoeff() < 1e-14);

  Field2D f = theta_field(th, rad, [](double t) { return 3.0 + std::cos(t); });
  Vector m = mean_theta(f);
  for (int j = 0; j < 8; ++j) CHECK(m[j] == doctest::Approx(3.0).epsilon(1e-14));

  Field2D c2 = theta_field(th, rad, [](double t) { return std::cos(t) * std::cos(t); });
  Vector m2 = mean_theta(c2);
  for (int j = 0; j < 8; ++j) CHECK(m2[j] == doctest::Approx(0.5).epsilon(1e-14));

  // mean_theta of a derivative is exactly the zero mode of a derivative: 0
  CHECK(mean_theta(d_theta(f)).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("d_radial: polynomial exactness on the radial grid") {
  auto th = std::make_shared<const ThetaGrid>(8);
  auto rad = Grid1D::radial(0.5, 12);
  Field2D f(th, rad);
  for (int i = 0; i < f.n_theta(); ++i)
    for (int j = 0; j < f.n_radial(); ++j) {
      const double r = rad->node(j);
      f.v(i, j) = r * r;
    }
  Field2D d = d_radial(f);
  for (int j = 0; j < f.n_radial(); ++j)
    CHECK(d.v(0, j) == doctest::Approx(2.0 * rad->node(j)).epsilon(1e-12));

  Field2D g(th, rad);
  for (int i = 0; i < g.n_theta(); ++i)
    for (int j = 0; j < g.n_radial(); ++j) g.v(i, j) = std::pow(rad->node(j), 3);
  Field2D d2 = d_radial(g, 2);
  for (int j = 0; j < g.n_radial(); ++j)
    CHECK(std::abs(d2.v(0, j) - 6.0 * rad->node(j)) < 1e-10);

  Field2D c(th, rad);
  c.v.setOnes();
  CHECK(norm_max(d_radial(c)) < 1e-12);
  CHECK_THROWS_AS(d_radial(f, -1), InvalidArgument);
}

TEST_CASE("layer grid: wall/far structure and clustering") {
  auto outer = Grid1D::layer(WallSide::outer, 30.0, 48);
  CHECK(outer->node(outer->wall_index()) == 0.0);
  CHECK(outer->node(outer->far_index()) == -30.0);
  // monotone ascending
  for (int j = 1; j < outer->size(); ++j) CHECK(outer->node(j) > outer->node(j - 1));
  // near-wall spacing much finer than the far spacing
  const int n = outer->size();
  const double near = outer->node(n - 1) - outer->node(n - 2);
  const double far = outer->node(1) - outer->node(0);
  CHECK(near < far / 6.0);

  auto inner = Grid1D::layer(WallSide::inner, 25.0, 48);
  CHECK(inner->node(inner->wall_index()) == 0.0);
  CHECK(inner->node(inner->far_index()) == 25.0);
}

TEST_CASE("cumulative_layer_integral: analytic antiderivatives") {
  auto th = std::make_shared<const ThetaGrid>(8);
  auto lay = Grid1D::layer(WallSide::outer, 35.0, 64);
  Field2D f(th, lay);
  for (int i = 0; i < f.n_theta(); ++i)
    for (int j = 0; j < f.n_radial(); ++j) f.v(i, j) = std::exp(lay->node(j));

  // int_{-inf}^{Y} e^z dz = e^Y; truncation error ~ e^{-35}
  Field2D F = cumulative_layer_integral(f, true);
  for (int j = 0; j < f.n_radial(); ++j)
    CHECK(std::abs(F.v(0, j) - std::exp(lay->node(j))) < 1e-8);

  Field2D z(th, lay);
  CHECK(norm_max(cumulative_layer_integral(z, true)) == 0.0);

  // fundamental theorem: integrate d(Ye^Y)/dY from far end, recover Y e^Y
  Field2D g(th, lay);
  for (int i = 0; i < g.n_theta(); ++i)
    for (int j = 0; j < g.n_radial(); ++j) {
      const double y = lay->node(j);
      g.v(i, j) = (1.0 + y) * std::exp(y);
    }
  Field2D G = cumulative_layer_integral(g, true);
  for (int j = 0; j < g.n_radial(); ++j) {
    const double y = lay->node(j);
    CHECK(std::abs(G.v(0, j) - y * std::exp(y)) < 1e-8);
  }

  // integration then differentiation recovers the input
  Field2D dF = d_radial(F);
  CHECK(norm_max(dF - f) < 1e-8);

  // non-decaying input is rejected
  Field2D bad(th, lay);
  bad.v.setOnes();
  CHECK_THROWS_AS(cumulative_layer_integral(bad, true), ConsistencyError);
}

TEST_CASE("quadrature and interpolation") {
  auto rad = Grid1D::radial(0.5, 24);
  // integral of r^2 over [0.5, 1] = (1 - 0.125)/3
  double acc = 0.0;
  for (int j = 0; j < rad->size(); ++j)
    acc += rad->quad_weights()[j] * rad->node(j) * rad->node(j);
  CHECK(acc == doctest::Approx((1.0 - 0.125) / 3.0).epsilon(1e-13));

  // barycentric interpolation of a smooth function
  Vector line(rad->size());
  for (int j = 0; j < rad->size(); ++j) line[j] = std::sin(3.0 * rad->node(j));
  const double x = 0.7317;
  CHECK(rad->interp_weights(x).dot(line) == doctest::Approx(std::sin(3.0 * x)).epsilon(1e-12));
  CHECK(rad->interp_deriv_weights(x).dot(line) ==
        doctest::Approx(3.0 * std::cos(3.0 * x)).epsilon(1e-9));

  // theta transform round trip
  ThetaGrid th(16);
  Vector v(16);
  for (int i = 0; i < 16; ++i) v[i] = std::cos(2.0 * th.node(i)) - 0.2 * std::sin(5.0 * th.node(i));
  CHECK((th.from_modes(th.to_modes(v)) - v).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("norms against closed forms") {
  auto th = std::make_shared<const ThetaGrid>(32);
  auto rad = Grid1D::radial(0.5, 24);
  Field2D f = theta_field(th, rad, [](double t) { return std::cos(t); });
  // ||cos||_{L2}^2 over theta x r = pi * (1 - 0.5)
  CHECK(norm_l2(f) == doctest::Approx(std::sqrt(kPi * 0.5)).epsilon(1e-12));
  CHECK(norm_max(f) == doctest::Approx(1.0).epsilon(1e-12));
}
