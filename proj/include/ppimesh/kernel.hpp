#pragma once

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>

namespace ppimesh {

/// exp(-gamma * ||x - z||^2)
template <typename DerivedX, typename DerivedZ>
typename DerivedX::Scalar rbf_kernel(const Eigen::MatrixBase<DerivedX>& x,
                                     const Eigen::MatrixBase<DerivedZ>& z,
                                     typename DerivedX::Scalar gamma) {
  if (x.size() != z.size()) throw std::invalid_argument("rbf_kernel: length mismatch");
  using std::exp;
  return exp(-gamma * (x.derived().reshaped() - z.derived().reshaped()).squaredNorm());
}

}  // namespace ppimesh
