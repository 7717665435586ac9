#pragma once

#include "realtori/common.hpp"

namespace realtori {

template <class Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> symmetrize(const Eigen::MatrixBase<Derived>& a) {
  using M = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const M m = a;
  return typename Derived::Scalar(0.5) * (m + m.transpose());
}

template <class Derived>
double max_abs(const Eigen::MatrixBase<Derived>& a) {
  return a.size() ? static_cast<double>(a.cwiseAbs().maxCoeff()) : 0.0;
}

// Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.
// Eigenvalues ascending; each eigenvector column has its first entry of
// magnitude > 1e-12 made positive, so the output is reproducible.
struct SymmetricEigen {
  Vec values;
  Mat vectors;
  int sweeps = 0;
};
SymmetricEigen jacobi_eigen(const Mat& a, double off_tol = 1e-12, int max_sweeps = 100);

// True when Cholesky succeeds with strictly positive pivots.
bool cholesky_ok(const Mat& a);

double smallest_eigenvalue(const Mat& a);

}  // namespace realtori
