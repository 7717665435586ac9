#include "realtori/geodesics.hpp"

#include <cmath>

#include <boost/math/quadrature/gauss.hpp>

#include "realtori/linalg.hpp"

namespace realtori {

void MinkowskiEuclidPoint::validate() const {
  require(V.cols() == static_cast<Eigen::Index>(Y.g()), "V must have g columns");
  require(V.allFinite(), "V has non-finite entries");
}

void GroupElementGLgh::validate() const {
  require(A.rows() == A.cols() && A.rows() > 0, "A must be square");
  require(a.cols() == A.rows(), "a must be h×g");
  require(A.allFinite() && a.allFinite(), "group element has non-finite entries");
  if (!Eigen::FullPivLU<Mat>(A).isInvertible()) fail(ErrorKind::InvalidInput, "A must be invertible");
}

GroupElementGLgh glgh_compose(const GroupElementGLgh& x, const GroupElementGLgh& y) {
  x.validate();
  y.validate();
  require(x.A.rows() == y.A.rows() && x.a.rows() == y.a.rows(), "group elements have different (g, h)");
  return {x.A * y.A, x.a * y.A.transpose().inverse() + y.a};
}

MinkowskiEuclidPoint glgh_act(const GroupElementGLgh& x, const MinkowskiEuclidPoint& p) {
  x.validate();
  p.validate();
  require(x.A.rows() == static_cast<Eigen::Index>(p.g()) && x.a.rows() == p.V.rows(), "shapes of (A,a) and (Y,V) differ");
  return {gl_act(x.A, p.Y), (p.V + x.a) * x.A.transpose()};
}

double metric_value(const MinkowskiEuclidPoint& p, const Mat& dY, const Mat& dV, double a_c, double b_c) {
  p.validate();
  require(a_c > 0 && b_c > 0, "metric constants must be positive");
  const auto g = static_cast<Eigen::Index>(p.g());
  require(dY.rows() == g && dY.cols() == g, "dY must be g×g");
  require(dV.rows() == p.V.rows() && dV.cols() == g, "dV must be h×g");
  const Mat yinv = p.Y.inverse();
  const Mat m = yinv * dY;
  return a_c * (m * m).trace() + b_c * (yinv * dV.transpose() * dV).trace();
}

namespace {

Eigen::Index coord_count(Eigen::Index g, Eigen::Index h) { return g * (g + 1) / 2 + h * g; }

Vec to_coords(const Mat& y, const Mat& v) {
  const Eigen::Index g = y.rows(), h = v.rows();
  Vec c(coord_count(g, h));
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < g; ++i)
    for (Eigen::Index j = i; j < g; ++j) c(k++) = y(i, j);
  for (Eigen::Index i = 0; i < h; ++i)
    for (Eigen::Index j = 0; j < g; ++j) c(k++) = v(i, j);
  return c;
}

std::pair<Mat, Mat> from_coords(const Vec& c, Eigen::Index g, Eigen::Index h) {
  Mat y(g, g), v(h, g);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < g; ++i)
    for (Eigen::Index j = i; j < g; ++j) y(i, j) = y(j, i) = c(k++);
  for (Eigen::Index i = 0; i < h; ++i)
    for (Eigen::Index j = 0; j < g; ++j) v(i, j) = c(k++);
  return {y, v};
}

}  // namespace

JacobianCheck volume_jacobian_check(const Mat& a, const MinkowskiEuclidPoint& probe, double step) {
  probe.validate();
  const Eigen::Index g = static_cast<Eigen::Index>(probe.g()), h = probe.V.rows();
  require(a.rows() == g && a.cols() == g, "A must be g×g");
  require(step > 0, "step must be positive");
  if (!Eigen::FullPivLU<Mat>(a).isInvertible()) fail(ErrorKind::InvalidInput, "A must be invertible");
  // The action on coordinates; Y is not required to stay positive under the
  // perturbation, so it is applied to plain symmetric matrices.
  auto act = [&](const Vec& c) {
    auto [y, v] = from_coords(c, g, h);
    return to_coords(Mat(a * y * a.transpose()), Mat(v * a.transpose()));
  };
  const Vec base = to_coords(probe.Y.matrix(), probe.V);
  const Eigen::Index n = base.size();
  Mat jac(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double hstep = step * std::max(1.0, std::abs(base(j)));
    Vec plus = base, minus = base;
    plus(j) += hstep;
    minus(j) -= hstep;
    jac.col(j) = (act(plus) - act(minus)) / (2 * hstep);
  }
  JacobianCheck out;
  out.numeric = std::abs(jac.determinant());
  out.analytic = std::pow(std::abs(a.determinant()), static_cast<double>(g + h + 1));
  if (!std::isfinite(out.numeric)) fail(ErrorKind::Numerical, "finite-difference Jacobian is not finite");
  out.relative_error = std::abs(out.numeric - out.analytic) / std::max(out.analytic, 1e-300);
  return out;
}

MinkowskiEuclidPoint geodesic_through_origin(const Mat& k, const Vec& lambdas, const Mat& z, double t) {
  const Eigen::Index g = lambdas.size();
  require(g > 0 && k.rows() == g && k.cols() == g, "k must be g×g for g eigenvalues");
  require(z.cols() == g, "Z must be h×g");
  require(max_abs(k.transpose() * k - Mat::Identity(g, g)) <= 1e-12, "k must be orthogonal");
  require(lambdas.cwiseAbs().maxCoeff() > 0, "λ must not be all zero");
  Vec e2(g), integral(g);
  for (Eigen::Index j = 0; j < g; ++j) {
    const double l = lambdas(j);
    e2(j) = std::exp(2 * l * t);
    // ∫₀ᵗ e^{l(t−s)} ds = (e^{lt} − 1)/l, written with expm1 for small l.
    integral(j) = std::abs(l * t) < 1e-300 ? t : std::expm1(l * t) / l;
  }
  const Mat y = k.transpose() * e2.asDiagonal() * k;
  return {SpdMatrix(symmetrize(y)), Mat(z * k.transpose() * integral.asDiagonal() * k)};
}

DistanceResult distance(const MinkowskiEuclidPoint& p0, const MinkowskiEuclidPoint& p1, double a_c, double b_c) {
  p0.validate();
  p1.validate();
  require(p0.g() == p1.g() && p0.h() == p1.h(), "points have different (g, h)");
  require(a_c > 0 && b_c > 0, "metric constants must be positive");
  const auto g = static_cast<Eigen::Index>(p0.g());
  const Mat y0 = p0.Y.matrix(), y1 = p1.Y.matrix();
  Eigen::LLT<Mat> llt(y0);
  const Mat linv = Mat(llt.matrixL()).inverse();
  const SymmetricEigen eig = jacobi_eigen(symmetrize(Mat(linv * y1 * linv.transpose())));
  if (!(eig.values.minCoeff() > 0)) fail(ErrorKind::Numerical, "pencil eigenvalues are not positive");

  DistanceResult r;
  r.t = eig.values;
  r.whitening = eig.vectors.transpose() * linv;
  for (Eigen::Index j = 0; j < g; ++j) {
    r.pencil_residual = std::max(r.pencil_residual, std::abs((r.t(j) * y0 - y1).determinant()));
  }
  const Vec logs = r.t.array().log().matrix();
  r.spd_term = a_c * logs.norm();

  const Mat vt = (p1.V - p0.V) * r.whitening.transpose();
  r.delta = vt.colwise().squaredNorm().transpose();
  if (r.delta.size() == 0) r.delta = Vec::Zero(g);
  auto integrand = [&](double s) {
    double acc = 0;
    for (Eigen::Index j = 0; j < g; ++j) acc += r.delta(j) * std::exp(-logs(j) * s);
    return std::sqrt(std::max(acc, 0.0));
  };
  // Composite 20-point Gauss–Legendre, doubling the panel count until two
  // successive values agree to 1e-11.
  using Rule = boost::math::quadrature::gauss<double, 20>;
  auto composite = [&](int panels) {
    double sum = 0;
    const double w = 1.0 / panels;
    for (int p = 0; p < panels; ++p) sum += Rule::integrate(integrand, p * w, (p + 1) * w);
    return sum;
  };
  int panels = 1;
  double prev = composite(panels);
  for (;;) {
    const double next = composite(2 * panels);
    panels *= 2;
    const bool done = std::abs(next - prev) < 1e-11;
    prev = next;
    if (done) break;
    if (panels >= (1 << 16)) fail(ErrorKind::Numerical, "quadrature did not converge");
  }
  r.quadrature_panels = panels;
  r.euclid_term = b_c * prev;
  r.distance = r.spd_term + r.euclid_term;
  return r;
}

bool in_fundamental_set(const MinkowskiEuclidPoint& p, double tol) {
  p.validate();
  if (p.g() > kMaxReductionDim) fail(ErrorKind::Unsupported, "fundamental set membership is supported for g ≤ 4");
  if (!is_minkowski_reduced(p.Y, tol)) return false;
  return p.V.size() == 0 || p.V.cwiseAbs().maxCoeff() <= 1 + tol;
}

}  // namespace realtori
