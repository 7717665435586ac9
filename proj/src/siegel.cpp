#include "realtori/siegel.hpp"

#include <cmath>

#include "realtori/linalg.hpp"

namespace realtori {

namespace {

const Complex kI(0.0, 1.0);

void check_square_even(const Mat& m, std::size_t g) {
  require(m.rows() == m.cols() && static_cast<std::size_t>(m.rows()) == 2 * g,
          "symplectic matrix must be 2g×2g for the point's g");
}

void check_symplectic(const Mat& m) {
  const double scale = std::max(1.0, max_abs(m));
  require(is_symplectic(m, 1e-9 * scale * scale), "matrix is not symplectic");
}

// N · D⁻¹ for complex square D, reporting numerically singular denominators.
CMat right_divide(const CMat& n, const CMat& d) {
  Eigen::PartialPivLU<CMat> lu(d.transpose());
  if (!(lu.rcond() > 1e-14)) fail(ErrorKind::Numerical, "singular denominator in fractional linear action");
  return lu.solve(n.transpose()).transpose();
}

CMat checked_symmetric(const CMat& r) {
  const double defect = max_abs(r - r.transpose());
  if (defect > 1e-9 * std::max(1.0, max_abs(r))) fail(ErrorKind::Numerical, "action result is not symmetric");
  return symmetrize(r);
}

}  // namespace

SiegelPoint::SiegelPoint(const Mat& x, const SpdMatrix& y, double symmetry_tol) : y_(y) {
  require(x.rows() == x.cols() && static_cast<std::size_t>(x.rows()) == y.g(), "Re Ω and Im Ω must have the same size");
  require(x.allFinite(), "Re Ω has non-finite entries");
  require(max_abs(x - x.transpose()) <= symmetry_tol * std::max(1.0, max_abs(x)), "Re Ω is not symmetric");
  x_ = symmetrize(x);
}

SiegelPoint SiegelPoint::from_complex(const CMat& omega, double symmetry_tol) {
  return SiegelPoint(omega.real(), Mat(omega.imag()), symmetry_tol);
}

CMat SiegelPoint::omega() const { return x_.cast<Complex>() + kI * y_.matrix().cast<Complex>(); }

DiskPoint::DiskPoint(const CMat& w, double symmetry_tol) {
  require(w.rows() == w.cols() && w.rows() > 0, "disk point must be square");
  require(w.allFinite(), "disk point has non-finite entries");
  require(max_abs(w - w.transpose()) <= symmetry_tol * std::max(1.0, max_abs(w)), "disk point is not symmetric");
  w_ = symmetrize(w);
  const CMat gap = CMat::Identity(w.rows(), w.cols()) - w_.conjugate() * w_;
  Eigen::LLT<CMat> llt(0.5 * (gap + gap.adjoint()));
  require(llt.info() == Eigen::Success && llt.matrixLLT().diagonal().real().minCoeff() > 0,
          "disk point violates I − W̄W > 0");
}

void JacobiGroupElement::validate(double tol) const {
  require(M.rows() == M.cols() && M.rows() % 2 == 0, "Jacobi element: M must be 2g×2g");
  const Eigen::Index g = M.rows() / 2;
  require(lambda.cols() == g && mu.cols() == g && lambda.rows() == mu.rows(), "Jacobi element: λ, μ must be h×g");
  require(kappa.rows() == lambda.rows() && kappa.cols() == lambda.rows(), "Jacobi element: κ must be h×h");
  check_symplectic(M);
  const Mat s = kappa + mu * lambda.transpose();
  require(max_abs(s - s.transpose()) <= tol * std::max(1.0, max_abs(s)), "Jacobi element: κ + μᵗλ is not symmetric");
}

JacobiGroupElement JacobiGroupElement::identity(std::size_t g, std::size_t h) {
  const auto gi = static_cast<Eigen::Index>(g), hi = static_cast<Eigen::Index>(h);
  return {Mat::Identity(2 * gi, 2 * gi), Mat::Zero(hi, gi), Mat::Zero(hi, gi), Mat::Zero(hi, hi)};
}

SiegelPoint sp_act(const Mat& m, const SiegelPoint& omega) {
  const std::size_t g = omega.g();
  check_square_even(m, g);
  check_symplectic(m);
  const auto gi = static_cast<Eigen::Index>(g);
  const CMat w = omega.omega();
  const CMat a = m.topLeftCorner(gi, gi).cast<Complex>(), b = m.topRightCorner(gi, gi).cast<Complex>();
  const CMat c = m.bottomLeftCorner(gi, gi).cast<Complex>(), d = m.bottomRightCorner(gi, gi).cast<Complex>();
  const CMat r = checked_symmetric(right_divide(a * w + b, c * w + d));
  const Mat im = r.imag();
  if (!cholesky_ok(im)) fail(ErrorKind::Numerical, "action result has non-positive imaginary part");
  return SiegelPoint(Mat(r.real()), SpdMatrix(im));
}

SiegelPoint sp_act(const IntMatrix& m, const SiegelPoint& omega) {
  require(is_symplectic(m), "matrix is not symplectic");
  return sp_act(to_real(m), omega);
}

SiegelPoint tau_point(const SiegelPoint& omega) { return SiegelPoint(Mat(-omega.X()), omega.Y()); }

Mat tau_group(const Mat& x) {
  require(x.rows() == x.cols() && x.rows() % 2 == 0, "tau: matrix must be 2g×2g");
  const Eigen::Index g = x.rows() / 2;
  Mat t = x;
  t.topRightCorner(g, g) *= -1;
  t.bottomLeftCorner(g, g) *= -1;
  return t;
}

IntMatrix tau_group(const IntMatrix& x) {
  require(x.is_square() && x.rows() % 2 == 0, "tau: matrix must be 2g×2g");
  const std::size_t g = x.rows() / 2;
  IntMatrix t = x;
  for (std::size_t i = 0; i < g; ++i)
    for (std::size_t j = 0; j < g; ++j) {
      t(i, g + j) = -t(i, g + j);
      t(g + i, j) = -t(g + i, j);
    }
  return t;
}

DiskPoint cayley_to_disk(const SiegelPoint& omega) {
  const auto g = static_cast<Eigen::Index>(omega.g());
  const CMat w = omega.omega();
  const CMat id = CMat::Identity(g, g);
  return DiskPoint(symmetrize(right_divide(w - kI * id, w + kI * id)), 1e-9);
}

SiegelPoint cayley_to_halfspace(const DiskPoint& w) {
  const auto g = static_cast<Eigen::Index>(w.g());
  const CMat id = CMat::Identity(g, g);
  const CMat r = checked_symmetric(kI * right_divide(id + w.W(), id - w.W()));
  return SiegelPoint::from_complex(r, 1e-9);
}

DiskPoint disk_act(const Mat& m, const DiskPoint& w) {
  const std::size_t g = w.g();
  check_square_even(m, g);
  check_symplectic(m);
  const auto gi = static_cast<Eigen::Index>(g);
  const CMat a = m.topLeftCorner(gi, gi).cast<Complex>(), b = m.topRightCorner(gi, gi).cast<Complex>();
  const CMat c = m.bottomLeftCorner(gi, gi).cast<Complex>(), d = m.bottomRightCorner(gi, gi).cast<Complex>();
  const CMat p = 0.5 * ((a + d) + kI * (b - c));
  const CMat q = 0.5 * ((a - d) - kI * (b + c));
  const CMat r = right_divide(p * w.W() + q, q.conjugate() * w.W() + p.conjugate());
  return DiskPoint(checked_symmetric(r), 1e-9);
}

bool is_gamma_star(const IntMatrix& gamma) {
  if (!gamma.is_square() || gamma.rows() % 2 != 0) return false;
  const std::size_t g = gamma.rows() / 2;
  const IntMatrix a = gamma.block(0, 0, g, g), b = gamma.block(0, g, g, g);
  const IntMatrix c = gamma.block(g, 0, g, g), d = gamma.block(g, g, g, g);
  if (!c.is_zero() || !is_unimodular(a)) return false;
  if (d != unimodular_inverse(a).transpose()) return false;
  return a * b.transpose() == b * a.transpose();
}

SiegelPoint gamma_star_act(const IntMatrix& gamma, const SiegelPoint& omega, double tol) {
  require(gamma.rows() == 2 * omega.g(), "Γ* element has the wrong size");
  require(is_gamma_star(gamma), "matrix is not in Γ*_g");
  require(in_script_H(omega, tol), "point is not in script-H_g (2 Re Ω not integral)");
  const std::size_t g = omega.g();
  const Mat a = to_real(gamma.block(0, 0, g, g)), b = to_real(gamma.block(0, g, g, g));
  const Mat x = a * omega.X() * a.transpose() + b * a.transpose();
  return SiegelPoint(symmetrize(x), gl_act(a, omega.Y()));
}

bool in_script_H(const SiegelPoint& omega, double tol) {
  const Mat twice = 2 * omega.X();
  for (Eigen::Index i = 0; i < twice.rows(); ++i)
    for (Eigen::Index j = 0; j < twice.cols(); ++j)
      if (std::abs(twice(i, j) - std::nearbyint(twice(i, j))) > tol) return false;
  return true;
}

std::pair<SiegelPoint, CMat> jacobi_group_act(const JacobiGroupElement& e, const SiegelPoint& omega, const CMat& z) {
  e.validate();
  const auto g = static_cast<Eigen::Index>(omega.g());
  require(e.M.rows() == 2 * g, "Jacobi element and point have different g");
  require(z.cols() == g && z.rows() == e.lambda.rows(), "Z must be h×g");
  const CMat w = omega.omega();
  const CMat c = e.M.bottomLeftCorner(g, g).cast<Complex>(), d = e.M.bottomRightCorner(g, g).cast<Complex>();
  const CMat shifted = z + e.lambda.cast<Complex>() * w + e.mu.cast<Complex>();
  return {sp_act(e.M, omega), right_divide(shifted, c * w + d)};
}

JacobiGroupElement jacobi_group_compose(const JacobiGroupElement& a, const JacobiGroupElement& b) {
  a.validate();
  b.validate();
  require(a.M.rows() == b.M.rows() && a.lambda.rows() == b.lambda.rows(), "Jacobi elements have different (g, h)");
  const Eigen::Index g = a.M.rows() / 2;
  Mat lm(a.lambda.rows(), 2 * g);
  lm << a.lambda, a.mu;
  const Mat t = lm * b.M;  // (λ̃, μ̃) = (λ, μ) M'
  const Mat lt = t.leftCols(g), mt = t.rightCols(g);
  JacobiGroupElement out;
  out.M = a.M * b.M;
  out.lambda = lt + b.lambda;
  out.mu = mt + b.mu;
  out.kappa = a.kappa + b.kappa + lt * b.mu.transpose() - mt * b.lambda.transpose();
  return out;
}

bool in_siegel_fundamental_set(const SiegelPoint& omega, double u) {
  require(u > 1, "fundamental set parameter u must exceed 1");
  if (max_abs(omega.X()) >= u) return false;
  const JacobiFactors f = jacobi_decomposition(omega.Y());
  const Eigen::Index g = f.d.size();
  for (Eigen::Index i = 0; i < g; ++i)
    for (Eigen::Index j = i + 1; j < g; ++j)
      if (std::abs(f.W(i, j)) >= u) return false;
  if (!(1 < u * f.d(0))) return false;
  for (Eigen::Index i = 0; i + 1 < g; ++i)
    if (!(f.d(i) < u * f.d(i + 1))) return false;
  return true;
}

std::pair<SiegelPoint, CMat> real_locus_embed(const SpdMatrix& y, const std::optional<Mat>& v) {
  CMat z;
  if (v) {
    require(static_cast<std::size_t>(v->cols()) == y.g(), "V must have g columns");
    z = v->cast<Complex>();
  } else {
    z = CMat(0, static_cast<Eigen::Index>(y.g()));
  }
  return {SiegelPoint::imaginary(y), z};
}

}  // namespace realtori
