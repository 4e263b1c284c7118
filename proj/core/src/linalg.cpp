#include "pbflow/linalg.hpp"

#include <lapacke.h>

#include "pbflow/errors.hpp"

namespace pbflow {

static_assert(sizeof(lapack_int) == sizeof(int), "pbflow expects 32-bit LAPACK integers");

DenseLU::DenseLU(Matrix a) : lu_(std::move(a)), piv_(lu_.rows()) {
  const auto n = static_cast<lapack_int>(lu_.rows());
  if (lu_.rows() != lu_.cols()) throw InvalidArgument("DenseLU: matrix not square");
  lapack_int info = LAPACKE_dgetrf(LAPACK_COL_MAJOR, n, n, lu_.data(), n,
                                   reinterpret_cast<lapack_int*>(piv_.data()));
  if (info != 0) throw SolverError("DenseLU: dgetrf failed, info=" + std::to_string(info));
}

Vector DenseLU::solve(const Vector& rhs) const {
  const auto n = static_cast<lapack_int>(lu_.rows());
  if (rhs.size() != lu_.rows()) throw InvalidArgument("DenseLU: rhs size mismatch");
  Vector x = rhs;
  lapack_int info = LAPACKE_dgetrs(LAPACK_COL_MAJOR, 'N', n, 1, lu_.data(), n,
                                   reinterpret_cast<const lapack_int*>(piv_.data()),
                                   x.data(), n);
  if (info != 0) throw SolverError("DenseLU: dgetrs failed, info=" + std::to_string(info));
  return x;
}

Vector dense_solve(Matrix a, const Vector& rhs) { return DenseLU(std::move(a)).solve(rhs); }

}  // namespace pbflow
