#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "pbflow/errors.hpp"
#include "pbflow/linalg.hpp"

namespace pbflow {

using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// ThetaGrid: uniform periodic collocation on [0, 2pi).
//
// Derivatives use the standard periodic differentiation matrix; mode access
// uses precomputed DFT matrices. Grid sizes here stay <= O(10^2), where a
// dense transform is as fast as an FFT and keeps every reduction in a fixed
// deterministic order.
// ---------------------------------------------------------------------------
class ThetaGrid {
 public:
  explicit ThetaGrid(int n_modes);

  int size() const { return n_; }
  const std::vector<double>& nodes() const { return nodes_; }
  double node(int i) const { return nodes_[i]; }

  // Spectral d/dtheta matrices (dense n x n). order in {1, 2} cached.
  const Matrix& diff(int order) const;

  // Half-spectrum transform of a real line: returns c_k, k = 0..n/2 with
  // f(theta) = sum_k c_k e^{ik theta} + conj. (c_0 and Nyquist real.)
  CVector to_modes(const Vector& line) const;
  Vector from_modes(const CVector& modes) const;

  int n_half() const { return n_ / 2 + 1; }
  double quad_weight() const;  // uniform trapezoid weight (exact for trig polys)

 private:
  int n_;
  std::vector<double> nodes_;
  Matrix d1_, d2_;
  CMatrix fwd_;  // (n/2+1) x n forward DFT
};

// ---------------------------------------------------------------------------
// Grid1D: collocation in the non-periodic direction (radial or layer).
//
// Nodes are images of Chebyshev-Gauss-Lobatto points under a smooth monotone
// map; differentiation matrices come from the reference CGL matrix by the
// chain rule, quadrature from Clenshaw-Curtis weights, interpolation from
// barycentric evaluation in the reference variable.
// ---------------------------------------------------------------------------
enum class GridKind { radial, layer_outer, layer_inner };
enum class WallSide { outer, inner };

class Grid1D {
 public:
  // Radial grid on [r0, 1].
  static std::shared_ptr<const Grid1D> radial(double r0, int n_points);
  // Layer grid: outer side spans [-depth, 0] (wall at 0), inner side spans
  // [0, depth] (wall at 0). `stretch` > 0 clusters nodes algebraically toward
  // the wall on top of the CGL clustering.
  static std::shared_ptr<const Grid1D> layer(WallSide side, double depth, int n_points,
                                             double stretch = 1.5);

  GridKind kind() const { return kind_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  const Vector& nodes() const { return nodes_; }
  double node(int j) const { return nodes_[j]; }

  const Matrix& D() const { return d1_; }
  const Matrix& D2() const { return d2_; }
  // derivative of one sample line, accumulated in extended precision
  Vector apply_deriv(const Vector& line, int order) const;
  const Vector& quad_weights() const { return qw_; }

  // Index of the wall node (layer grids) and far node.
  int wall_index() const;
  int far_index() const;

  // Cumulative integral matrices: (S f)_j = int_{anchor}^{x_j} f dx with the
  // anchor at the wall node or at the far node.
  const Matrix& cumulative_from_wall() const { return cum_wall_; }
  const Matrix& cumulative_from_far() const { return cum_far_; }

  // Barycentric interpolation row: weights w with (w . line) = p(x) where p
  // interpolates the line values. x must lie within the span.
  Vector interp_weights(double x) const;
  // Same for the derivative p'(x).
  Vector interp_deriv_weights(double x) const;

  double span_min() const { return nodes_[0]; }
  double span_max() const { return nodes_[size() - 1]; }

 private:
  Grid1D() = default;
  void build(GridKind kind, const std::vector<double>& ref_x, const std::vector<double>& phys,
             const std::vector<double>& dphys_dx, const std::vector<double>& d2phys_dx2);

  GridKind kind_ = GridKind::radial;
  Vector nodes_;           // ascending physical nodes
  Vector ref_x_;           // CGL reference nodes mapped 1:1 (ascending in x)
  Vector bary_w_;          // barycentric weights on ref_x_
  Matrix d1_, d2_;
  // extended-precision copies: collocation derivative application happens in
  // long double so exact-solution residuals reach the 1e-10 regressions
  Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> d1x_, d2x_;
  Vector qw_;
  Matrix cum_wall_, cum_far_;
  double ref_of_phys_a_ = 0.0, ref_of_phys_b_ = 0.0;  // map params (see .cpp)
  double stretch_ = 0.0;
  double depth_ = 0.0;
  double phys_to_ref(double x) const;
};

// ---------------------------------------------------------------------------
// Field2D: real values on (theta node) x (radial/layer node).
// ---------------------------------------------------------------------------
struct Field2D {
  std::shared_ptr<const ThetaGrid> theta;
  std::shared_ptr<const Grid1D> grid;
  Matrix v;  // size theta->size() x grid->size()

  Field2D() = default;
  Field2D(std::shared_ptr<const ThetaGrid> th, std::shared_ptr<const Grid1D> g);
  Field2D(std::shared_ptr<const ThetaGrid> th, std::shared_ptr<const Grid1D> g, Matrix values);

  int n_theta() const { return static_cast<int>(v.rows()); }
  int n_radial() const { return static_cast<int>(v.cols()); }
  void require_finite(const char* what) const;
};

// Spectral derivative in theta. order >= 1.
Field2D d_theta(const Field2D& f, int order = 1);
// Collocation derivative in the radial/layer direction. order >= 1.
Field2D d_radial(const Field2D& f, int order = 1);
// (1/2pi) contour integral over theta, one value per radial node.
Vector mean_theta(const Field2D& f);

// Antiderivative in the layer variable vanishing at the far end (default) or
// anchored at the wall. With from_far_end the input must decay: the far-node
// magnitude is checked against decay_tol * max|f|.
Field2D cumulative_layer_integral(const Field2D& f, bool from_far_end = true,
                                  double decay_tol = 1e-6);

// Pointwise helpers.
Field2D operator+(const Field2D& a, const Field2D& b);
Field2D operator-(const Field2D& a, const Field2D& b);
Field2D operator*(double s, const Field2D& a);
Field2D multiply(const Field2D& a, const Field2D& b);           // Hadamard
Field2D broadcast_theta(const Field2D& like, const Vector& theta_line);  // g(theta) -> field
Field2D broadcast_radial(const Field2D& like, const Vector& radial_line);  // s(x) -> field
Field2D zeros_like(const Field2D& like);

// Weighted L2 norm over the (theta x radial) domain and max norm.
double norm_l2(const Field2D& f);
double norm_max(const Field2D& f);

// Interpolate one theta-line of a field at physical coordinate x.
double eval_line(const Field2D& f, int itheta, double x);

}  // namespace pbflow
