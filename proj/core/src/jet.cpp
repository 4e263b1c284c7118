#include "pbflow/jet.hpp"

namespace pbflow {

int Jet::slot(int order) {
  if (order < kLo || order > kHi) throw InvalidArgument("Jet: order outside the retained window");
  return order - kLo;
}

Jet::Jet(std::shared_ptr<const ThetaGrid> th, std::shared_ptr<const Grid1D> g)
    : theta_(std::move(th)), grid_(std::move(g)) {}

Jet Jet::term(const Field2D& f, int order) {
  Jet j(f.theta, f.grid);
  j.c_[slot(order)] = f.v;
  j.live_[slot(order)] = true;
  return j;
}

Field2D Jet::coeff_field(int order) const {
  Field2D f(theta_, grid_);
  if (live_[slot(order)]) f.v = c_[slot(order)];
  return f;
}

Jet& Jet::add(const Jet& other, double s) {
  for (int k = 0; k < kSlots; ++k) {
    if (!other.live_[k]) continue;
    if (live_[k])
      c_[k] += s * other.c_[k];
    else {
      c_[k] = s * other.c_[k];
      live_[k] = true;
    }
  }
  return *this;
}

Jet& Jet::add_term(const Field2D& f, int order, double s) {
  const int k = slot(order);
  if (live_[k])
    c_[k] += s * f.v;
  else {
    c_[k] = s * f.v;
    live_[k] = true;
  }
  return *this;
}

Jet Jet::operator+(const Jet& o) const {
  Jet out = *this;
  out.add(o);
  return out;
}

Jet Jet::operator-(const Jet& o) const {
  Jet out = *this;
  out.add(o, -1.0);
  return out;
}

Jet Jet::mul(const Jet& o) const {
  Jet out(theta_, grid_);
  for (int a = 0; a < kSlots; ++a) {
    if (!live_[a]) continue;
    for (int b = 0; b < kSlots; ++b) {
      if (!o.live_[b]) continue;
      const int order = (a + kLo) + (b + kLo);
      if (order < kLo || order > kHi) continue;
      const int k = order - kLo;
      if (out.live_[k])
        out.c_[k] += c_[a].cwiseProduct(o.c_[b]);
      else {
        out.c_[k] = c_[a].cwiseProduct(o.c_[b]);
        out.live_[k] = true;
      }
    }
  }
  return out;
}

Jet Jet::scale(double s) const {
  Jet out = *this;
  for (int k = 0; k < kSlots; ++k)
    if (out.live_[k]) out.c_[k] *= s;
  return out;
}

Jet Jet::scale_field(const Field2D& f) const {
  Jet out = *this;
  for (int k = 0; k < kSlots; ++k)
    if (out.live_[k]) out.c_[k] = out.c_[k].cwiseProduct(f.v);
  return out;
}

Jet Jet::dtheta(int order) const {
  Jet out = *this;
  for (int k = 0; k < kSlots; ++k) {
    if (!out.live_[k]) continue;
    Matrix m = out.c_[k];
    for (int d = 0; d < order; ++d) m = theta_->diff(1) * m;
    out.c_[k] = std::move(m);
  }
  return out;
}

Jet Jet::dlayer(int order) const {
  Jet out = *this;
  for (int k = 0; k < kSlots; ++k) {
    if (!out.live_[k]) continue;
    Matrix m = out.c_[k];
    for (int d = 0; d < order; ++d) m = m * grid_->D().transpose();
    out.c_[k] = std::move(m);
  }
  return out;
}

Jet Jet::shift(int s) const {
  Jet out(theta_, grid_);
  for (int k = 0; k < kSlots; ++k) {
    if (!live_[k]) continue;
    const int order = k + kLo + s;
    if (order < kLo || order > kHi) continue;
    out.c_[order - kLo] = c_[k];
    out.live_[order - kLo] = true;
  }
  return out;
}

Jet Jet::dr() const { return dlayer().shift(-1); }

}  // namespace pbflow
