#pragma once

#include <Eigen/Dense>

namespace pbflow {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Dense LU factorization kept alive for repeated right-hand sides.
// Routed through LAPACK (dgetrf/dgetrs); systems here reach ~10^4 unknowns.
class DenseLU {
 public:
  explicit DenseLU(Matrix a);  // takes ownership, factorizes in place
  Vector solve(const Vector& rhs) const;
  int n() const { return static_cast<int>(lu_.rows()); }

 private:
  Matrix lu_;
  std::vector<int> piv_;
};

// One-shot dense solve.
Vector dense_solve(Matrix a, const Vector& rhs);

}  // namespace pbflow
