#pragma once

#include <array>

#include "pbflow/spectral.hpp"

namespace pbflow {

// Truncated power series in the layer-scale parameter: sum_k eps^k a_k(theta, l)
// with coefficient orders -2..4. Orders below -2 or above 4 are discarded;
// every quantity extracted from a jet lives at order <= 3, which the retained
// window covers for all products and derivatives used here.
class Jet {
 public:
  static constexpr int kLo = -2;
  static constexpr int kHi = 4;
  static constexpr int kSlots = kHi - kLo + 1;

  Jet(std::shared_ptr<const ThetaGrid> th, std::shared_ptr<const Grid1D> g);
  static Jet term(const Field2D& f, int order);  // f * eps^order

  std::shared_ptr<const ThetaGrid> theta() const { return theta_; }
  std::shared_ptr<const Grid1D> grid() const { return grid_; }

  bool nonzero(int order) const { return live_[slot(order)]; }
  const Matrix& coeff(int order) const { return c_[slot(order)]; }
  Field2D coeff_field(int order) const;

  Jet& add(const Jet& other, double scale = 1.0);
  Jet& add_term(const Field2D& f, int order, double scale = 1.0);
  Jet operator+(const Jet& o) const;
  Jet operator-(const Jet& o) const;
  Jet mul(const Jet& o) const;       // truncated Cauchy product
  Jet scale(double s) const;
  Jet scale_field(const Field2D& f) const;  // pointwise per coefficient
  Jet dtheta(int order = 1) const;
  Jet dlayer(int order = 1) const;   // per-coefficient d/dl
  Jet dr() const;                    // d/dr = eps^{-1} d/dl: dlayer then shift(-1)
  Jet shift(int s) const;            // multiply by eps^s

 private:
  static int slot(int order);
  std::shared_ptr<const ThetaGrid> theta_;
  std::shared_ptr<const Grid1D> grid_;
  std::array<Matrix, kSlots> c_;
  std::array<bool, kSlots> live_{};
};

}  // namespace pbflow
