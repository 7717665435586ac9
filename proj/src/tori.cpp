#include "realtori/tori.hpp"

#include <cmath>

#include "realtori/linalg.hpp"

namespace realtori {

RealTorus::RealTorus(const Mat& pi, bool principally_polarized) : pi_(pi), polarized_(principally_polarized) {
  require(pi.rows() == pi.cols() && pi.rows() > 0, "period matrix must be square and nonempty");
  require(pi.allFinite(), "period matrix has non-finite entries");
  Eigen::FullPivLU<Mat> lu(pi);
  require(lu.isInvertible() && std::abs(pi.determinant()) > 0, "period matrix must be invertible");
}

RealTorus torus_from_spd(const SpdMatrix& y) { return RealTorus(y.matrix(), true); }

AssociatedComplexTorus associated_complex_torus(const RealTorus& t) {
  const auto g = static_cast<Eigen::Index>(t.g());
  CMat basis(g, 2 * g);
  basis.leftCols(g) = CMat::Identity(g, g);
  basis.rightCols(g) = Complex(0, 1) * t.Pi().cast<Complex>();
  // The real 2g×2g matrix of real and imaginary parts must be invertible.
  Mat real_form(2 * g, 2 * g);
  real_form << basis.real(), basis.imag();
  if (Eigen::FullPivLU<Mat>(real_form).rank() != 2 * g) fail(ErrorKind::Numerical, "lattice columns are R-dependent");
  return {basis};
}

Complex hermitian_form_eval(const SpdMatrix& y, const CVec& x, const CVec& w) {
  require(static_cast<std::size_t>(x.size()) == y.g() && static_cast<std::size_t>(w.size()) == y.g(),
          "vectors must have length g");
  const CMat yinv = y.inverse().cast<Complex>();
  return (x.transpose() * yinv * w.conjugate())(0, 0);
}

RealTorus dual_period_matrix(const RealTorus& t) {
  return RealTorus(Mat(t.Pi().inverse().transpose()), t.principally_polarized());
}

std::optional<IntMatrix> rational_representation(const Mat& phi, const RealTorus& t, const RealTorus& t2, double tol) {
  require(static_cast<std::size_t>(phi.rows()) == t2.g() && static_cast<std::size_t>(phi.cols()) == t.g(),
          "Phi must be g'×g");
  const Mat approx = t2.Pi().fullPivLu().solve(phi * t.Pi());
  const Mat rounded = approx.array().round().matrix();
  if (max_abs(t2.Pi() * rounded - phi * t.Pi()) > tol) return std::nullopt;
  return round_to_integer(rounded, 0.0);
}

BigInt isogeny_degree(const IntMatrix& r) {
  require(r.is_square(), "rational representation must be square");
  return abs(det_int(r));
}

Polarization is_polarized_symmetric(const Mat& pi, double sym_tol) {
  require(pi.rows() == pi.cols() && pi.rows() > 0, "period matrix must be square");
  if (max_abs(pi - pi.transpose()) > sym_tol * std::max(1.0, max_abs(pi)))
    fail(ErrorKind::Unsupported, "polarizability is decided only for symmetric period matrices");
  const Mat s = symmetrize(pi);
  require(Eigen::FullPivLU<Mat>(s).isInvertible(), "period matrix must be invertible");
  return cholesky_ok(s) || cholesky_ok(-s) ? Polarization::Polarized : Polarization::NotPolarized;
}

}  // namespace realtori
