#pragma once

#include <Eigen/Core>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ppimesh {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Orthonormal DCT-II spectrum of a signal.
template <typename Scalar>
struct CoefficientVector {
  VectorX<Scalar> y;
  /// Length of the signal the coefficients describe; reconstruction runs over this many samples.
  Eigen::Index n_source = 0;
};

/// First `rows` rows of the orthonormal DCT-II matrix of size n:
///   M(k, j) = w(k) cos(pi (2j + 1) k / (2n)),  w(0) = 1/sqrt(n), w(k>0) = sqrt(2/n).
/// Forward transform is M x, inverse is M^T y.
template <typename Scalar = double>
MatrixX<Scalar> dct_basis(Eigen::Index n, Eigen::Index rows) {
  if (n < 1) throw std::invalid_argument("dct_basis: signal length must be >= 1");
  if (rows < 0 || rows > n) throw std::invalid_argument("dct_basis: row count out of range");
  using std::cos;
  using std::sqrt;
  const Scalar pi = std::numbers::pi_v<Scalar>;
  const Scalar first = Scalar(1) / sqrt(Scalar(n));
  const Scalar rest = sqrt(Scalar(2) / Scalar(n));
  const long long period = 4 * static_cast<long long>(n);
  MatrixX<Scalar> basis(rows, n);
  for (Eigen::Index k = 0; k < rows; ++k) {
    const Scalar weight = k == 0 ? first : rest;
    for (Eigen::Index j = 0; j < n; ++j) {
      // The cosine has period 4n in units of pi/(2n); reduce before scaling.
      const long long phase = ((2 * static_cast<long long>(j) + 1) * k) % period;
      basis(k, j) = weight * cos(pi * Scalar(phase) / Scalar(2 * n));
    }
  }
  return basis;
}

template <typename Derived>
CoefficientVector<typename Derived::Scalar> dct_forward(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  if (x.size() == 0) throw std::invalid_argument("dct_forward: empty signal");
  if (!x.allFinite()) throw std::invalid_argument("dct_forward: non-finite sample");
  const auto n = x.size();
  CoefficientVector<Scalar> out;
  out.y = dct_basis<Scalar>(n, n) * x.derived().reshaped();
  out.n_source = n;
  return out;
}

template <typename Scalar>
VectorX<Scalar> dct_inverse(const CoefficientVector<Scalar>& coefficients) {
  const auto n = coefficients.y.size();
  if (n == 0) throw std::invalid_argument("dct_inverse: empty coefficient vector");
  if (coefficients.n_source != n) {
    throw std::invalid_argument("dct_inverse: coefficient count differs from reconstruction length");
  }
  return dct_basis<Scalar>(n, n).transpose() * coefficients.y;
}

/// Keeps the first f coefficients, or appends zeros up to f. The result
/// reconstructs over exactly f samples.
template <typename Scalar>
CoefficientVector<Scalar> truncate_or_pad(const CoefficientVector<Scalar>& coefficients,
                                          Eigen::Index f) {
  if (f < 1) throw std::invalid_argument("truncate_or_pad: frequency budget must be >= 1");
  CoefficientVector<Scalar> out;
  out.y = VectorX<Scalar>::Zero(f);
  const auto kept = std::min<Eigen::Index>(f, coefficients.y.size());
  out.y.head(kept) = coefficients.y.head(kept);
  out.n_source = f;
  return out;
}

}  // namespace ppimesh
