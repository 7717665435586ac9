#include "realtori/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace realtori {

SymmetricEigen jacobi_eigen(const Mat& input, double off_tol, int max_sweeps) {
  require(input.rows() == input.cols(), "jacobi_eigen: matrix must be square");
  const Eigen::Index n = input.rows();
  Mat a = symmetrize(input);
  Mat v = Mat::Identity(n, n);
  const double scale = std::max(1.0, a.norm());

  auto off_norm = [&]() {
    double s = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) s += 2 * a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  int sweep = 0;
  while (off_norm() > off_tol * scale) {
    if (sweep++ >= max_sweeps) fail(ErrorKind::Numerical, "Jacobi eigensolver did not converge");
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
  }

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return a(i, i) < a(j, j); });

  SymmetricEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  out.sweeps = sweep;
  for (Eigen::Index c = 0; c < n; ++c) {
    out.values(c) = a(order[c], order[c]);
    Vec col = v.col(order[c]);
    for (Eigen::Index k = 0; k < n; ++k)
      if (std::abs(col(k)) > 1e-12) {
        if (col(k) < 0) col = -col;
        break;
      }
    out.vectors.col(c) = col;
  }
  return out;
}

bool cholesky_ok(const Mat& a) {
  if (a.rows() != a.cols() || a.rows() == 0) return false;
  if (!a.allFinite()) return false;
  Eigen::LLT<Mat> llt(a);
  if (llt.info() != Eigen::Success) return false;
  const Mat& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    if (!(l(i, i) > 0)) return false;
  return true;
}

double smallest_eigenvalue(const Mat& a) { return jacobi_eigen(a).values(0); }

}  // namespace realtori
