#include "realtori/spd_cone.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <type_traits>

#include "realtori/linalg.hpp"

namespace realtori {

SpdMatrix::SpdMatrix(const Mat& y, double symmetry_tol) {
  require(y.rows() == y.cols() && y.rows() > 0, "SPD matrix must be square and non-empty");
  require(y.allFinite(), "SPD matrix has non-finite entries");
  const double scale = std::max(1.0, max_abs(y));
  require(max_abs(y - y.transpose()) <= symmetry_tol * scale, "matrix is not symmetric");
  y_ = y;
  for (Eigen::Index i = 0; i < y.rows(); ++i)
    for (Eigen::Index j = 0; j < i; ++j) y_(i, j) = y_(j, i);
  require(cholesky_ok(y_), "matrix is not positive definite");
}

double SpdMatrix::det() const { return Eigen::LLT<Mat>(y_).matrixLLT().diagonal().array().square().prod(); }

Mat SpdMatrix::inverse() const { return symmetrize(Eigen::LLT<Mat>(y_).solve(Mat::Identity(y_.rows(), y_.cols()))); }

Mat IwasawaBlocks::recompose() const {
  if (variant == IwasawaVariant::Lower) {
    const Eigen::Index r = F.rows(), s = G.rows();
    Mat y(r + s, r + s);
    y.topLeftCorner(r, r) = F + H.transpose() * G * H;
    y.topRightCorner(r, s) = H.transpose() * G;
    y.bottomLeftCorner(s, r) = G * H;
    y.bottomRightCorner(s, s) = G;
    return y;
  }
  const Eigen::Index r = F.rows(), s = G.rows();
  Mat y(r + s, r + s);
  y.topLeftCorner(r, r) = F;
  y.topRightCorner(r, s) = F * H;
  y.bottomLeftCorner(s, r) = H.transpose() * F;
  y.bottomRightCorner(s, s) = H.transpose() * F * H + G;
  return y;
}

SpdMatrix gl_act(const Mat& a, const SpdMatrix& y) {
  require(a.rows() == a.cols() && static_cast<std::size_t>(a.rows()) == y.g(), "gl_act: shape mismatch");
  const double scale = std::pow(std::max(1.0, max_abs(a)), static_cast<double>(a.rows()));
  if (std::abs(a.determinant()) <= 1e-14 * scale) fail(ErrorKind::InvalidInput, "gl_act: A is singular");
  return SpdMatrix(symmetrize(a * y.matrix() * a.transpose()));
}

JacobiFactors jacobi_decomposition(const SpdMatrix& y) {
  const Eigen::Index n = y.matrix().rows();
  const Mat& m = y.matrix();
  JacobiFactors f{Mat::Identity(n, n), Vec::Zero(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    double di = m(i, i);
    for (Eigen::Index k = 0; k < i; ++k) di -= f.d(k) * f.W(k, i) * f.W(k, i);
    if (!(di > 0)) fail(ErrorKind::Numerical, "Jacobi decomposition lost positivity");
    f.d(i) = di;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double s = m(i, j);
      for (Eigen::Index k = 0; k < i; ++k) s -= f.d(k) * f.W(k, i) * f.W(k, j);
      f.W(i, j) = s / di;
    }
  }
  return f;
}

std::vector<IntVector> enumerate_short_vectors(const Mat& y, double bound, bool half, std::size_t node_cap) {
  const Eigen::Index n = y.rows();
  std::vector<IntVector> out;
  if (!(bound > 0)) return out;
  const JacobiFactors jf = jacobi_decomposition(SpdMatrix(y));
  const double slack_bound = bound * (1 + 1e-9) + 1e-300;
  IntVector x(n, 0);
  std::size_t nodes = 0;

  // Quadratic form value x Y ᵗx = Σ d_i (x_i + Σ_{j>i} w_ij x_j)^2, filled from the last coordinate.
  std::function<void(Eigen::Index, double)> rec = [&](Eigen::Index i, double remaining) {
    if (++nodes > node_cap) fail(ErrorKind::Numerical, "short-vector enumeration exceeded its node cap");
    double center = 0;
    for (Eigen::Index j = i + 1; j < n; ++j) center -= jf.W(i, j) * static_cast<double>(x[j]);
    const double radius = std::sqrt(std::max(0.0, remaining) / jf.d(i));
    const long long lo = static_cast<long long>(std::ceil(center - radius - 1e-12));
    const long long hi = static_cast<long long>(std::floor(center + radius + 1e-12));
    for (long long v = lo; v <= hi; ++v) {
      const double t = static_cast<double>(v) - center;
      const double rest = remaining - jf.d(i) * t * t;
      if (rest < -1e-12 * slack_bound) continue;
      x[i] = v;
      if (i == 0) {
        bool nonzero = std::any_of(x.begin(), x.end(), [](long long e) { return e != 0; });
        if (!nonzero) continue;
        if (half) {
          auto it = std::find_if(x.begin(), x.end(), [](long long e) { return e != 0; });
          if (*it < 0) continue;
        }
        Eigen::VectorXd xv(n);
        for (Eigen::Index k = 0; k < n; ++k) xv(k) = static_cast<double>(x[k]);
        if (xv.dot(y * xv) <= slack_bound) out.push_back(x);
      } else {
        rec(i - 1, rest);
      }
    }
    x[i] = 0;
  };
  rec(n - 1, slack_bound);
  return out;
}

namespace {

using LLMat = std::vector<IntVector>;  // row-major small integer matrix

Mat ll_to_mat(const LLMat& a) {
  const Eigen::Index n = static_cast<Eigen::Index>(a.size());
  Mat m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = static_cast<double>(a[i][j]);
  return m;
}

Mat transform(const LLMat& a, const Mat& y) {
  const Mat am = ll_to_mat(a);
  return symmetrize(am * y * am.transpose());
}

long long gcd_tail(const IntVector& x, std::size_t k) {
  long long g = 0;
  for (std::size_t i = k; i < x.size(); ++i) g = std::gcd(g, std::llabs(x[i]));
  return g;
}

void check_entry_size(const LLMat& a) {
  for (const auto& row : a)
    for (long long v : row)
      if (std::llabs(v) > (1ll << 40)) fail(ErrorKind::Numerical, "reduction transform entries overflowed");
}

// Cheap preconditioning: repeatedly subtract integer multiples of one basis
// vector from another while this shortens it.
void pairwise_reduce(const Mat& y, LLMat& a) {
  const std::size_t n = a.size();
  for (int iter = 0; iter < 10000; ++iter) {
    bool changed = false;
    Mat r = transform(a, y);
    for (std::size_t i = 0; i < n && !changed; ++i)
      for (std::size_t j = 0; j < n && !changed; ++j) {
        if (i == j) continue;
        const double q = std::nearbyint(r(i, j) / r(j, j));
        if (q == 0) continue;
        const double next = r(i, i) - 2 * q * r(i, j) + q * q * r(j, j);
        if (next < r(i, i) * (1 - 1e-12)) {
          const long long qi = static_cast<long long>(q);
          for (std::size_t c = 0; c < n; ++c) a[i][c] -= qi * a[j][c];
          changed = true;
        }
      }
    check_entry_size(a);
    if (!changed) return;
  }
}

// Unimodular m×m integer matrix whose first row is the primitive vector v.
IntMatrix complete_to_basis(const IntVector& v) {
  const std::size_t m = v.size();
  IntMatrix row(1, m);
  for (std::size_t j = 0; j < m; ++j) row(0, j) = v[j];
  const SmithForm s = smith_normal_form(row);
  IntMatrix c = unimodular_inverse(s.V);
  // v V = U⁻¹ D = ±e_1, hence v = ±(first row of V⁻¹).
  if (s.U(0, 0) < 0)
    for (std::size_t j = 0; j < m; ++j) c(0, j) = -c(0, j);
  for (std::size_t j = 0; j < m; ++j)
    if (c(0, j) != v[j]) fail(ErrorKind::Internal, "basis completion failed");
  return c;
}

bool lex_less(const IntVector& a, const IntVector& b) { return a < b; }

void normalize_sign(IntVector& x) {
  for (long long v : x)
    if (v != 0) {
      if (v < 0)
        for (auto& e : x) e = -e;
      return;
    }
}

}  // namespace

IsometrySearch find_isometries(const Mat& r1, const Mat& r2, double tol, std::size_t max_maps,
                               std::size_t node_cap) {
  const Eigen::Index n = r1.rows();
  require(r2.rows() == n && r1.cols() == n && r2.cols() == n, "find_isometries: shape mismatch");
  IsometrySearch out;
  std::vector<std::vector<Eigen::VectorXd>> cands(n);
  std::vector<std::vector<IntVector>> cand_int(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    std::vector<IntVector> shorts;
    try {
      shorts = enumerate_short_vectors(r1, r2(i, i) + tol, false, node_cap);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Numerical) throw;
      out.complete = false;
      return out;
    }
    for (const IntVector& x : shorts) {
      Eigen::VectorXd xv(n);
      for (Eigen::Index k = 0; k < n; ++k) xv(k) = static_cast<double>(x[k]);
      if (std::abs(xv.dot(r1 * xv) - r2(i, i)) > tol) continue;
      cands[i].push_back(xv);
      cand_int[i].push_back(x);
    }
    out.candidates += cands[i].size();
    if (cands[i].empty()) return out;
  }
  std::vector<std::size_t> pick(n);
  std::size_t nodes = 0;
  std::function<bool(Eigen::Index)> rec = [&](Eigen::Index i) -> bool {
    if (i == n) {
      IntMatrix b(n, n);
      for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c) b(r, c) = cand_int[r][pick[r]][c];
      if (is_unimodular(b)) {
        out.maps.push_back(std::move(b));
        if (out.maps.size() >= max_maps) {
          out.complete = false;
          return false;
        }
      }
      return true;
    }
    for (std::size_t c = 0; c < cands[i].size(); ++c) {
      if (++nodes > node_cap) {
        out.complete = false;
        return false;
      }
      const Eigen::VectorXd w = r1 * cands[i][c];
      bool ok = true;
      for (Eigen::Index j = 0; j < i && ok; ++j)
        if (std::abs(cands[j][pick[j]].dot(w) - r2(j, i)) > tol) ok = false;
      if (!ok) continue;
      pick[i] = c;
      if (!rec(i + 1)) return false;
    }
    return true;
  };
  rec(0);
  return out;
}

MinkowskiResult minkowski_reduce(const SpdMatrix& y) {
  const std::size_t n = y.g();
  if (n > kMaxReductionDim) fail(ErrorKind::Unsupported, "Minkowski reduction is supported for g <= 4");
  const Mat& ym = y.matrix();

  LLMat a(n, IntVector(n, 0));
  for (std::size_t i = 0; i < n; ++i) a[i][i] = 1;
  pairwise_reduce(ym, a);

  for (std::size_t k = 0; k < n; ++k) {
    const Mat r = transform(a, ym);
    const double rkk = r(k, k);
    const double tie = 1e-12 * std::max(1.0, rkk);
    const auto cands = enumerate_short_vectors(r, rkk, false);
    bool improved = false;
    double best_val = rkk;
    IntVector best;
    for (IntVector x : cands) {
      if (gcd_tail(x, k) != 1) continue;
      Eigen::VectorXd xv(n);
      for (std::size_t i = 0; i < n; ++i) xv(i) = static_cast<double>(x[i]);
      const double val = xv.dot(r * xv);
      normalize_sign(x);
      if (val < best_val - tie) {
        best_val = val;
        best = x;
        improved = true;
      } else if (improved && std::abs(val - best_val) <= tie && lex_less(x, best)) {
        // Near-equal values: the lexicographically smaller vector wins.
        best_val = std::min(best_val, val);
        best = x;
      }
    }
    if (!improved) continue;

    IntVector tail(best.begin() + static_cast<long>(k), best.end());
    const IntMatrix c = complete_to_basis(tail);
    LLMat u(n, IntVector(n, 0));
    for (std::size_t i = 0; i < k; ++i) u[i][i] = 1;
    for (std::size_t j = 0; j < k; ++j) u[k][j] = best[j];
    for (std::size_t i = 0; i < n - k; ++i)
      for (std::size_t j = 0; j < n - k; ++j) u[k + i][k + j] = to_ll(c(i, j));
    LLMat next(n, IntVector(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = 0; l < n; ++l) next[i][j] += u[i][l] * a[l][j];
    a = std::move(next);
    check_entry_size(a);
  }

  // Sign condition: make consecutive off-diagonal entries nonnegative by sign flips.
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const Mat r = transform(a, ym);
    if (r(k, k + 1) < 0)
      for (auto& e : a[k + 1]) e = -e;
  }

  IntMatrix am(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) am(i, j) = a[i][j];

  // R is now fixed; the transform is only determined up to the automorphisms
  // of R. Report the lexicographically largest (row-major) one.
  const Mat r = transform(a, ym);
  const double tol = 1e-10 * std::max(1.0, r.diagonal().maxCoeff());
  const IsometrySearch stab = find_isometries(r, r, tol);
  IntMatrix best = am;
  for (const IntMatrix& s : stab.maps) {
    IntMatrix cand = s * am;
    if (best.entries() < cand.entries()) best = std::move(cand);
  }
  return MinkowskiResult{SpdMatrix(symmetrize(to_real(best) * ym * to_real(best).transpose())), best};
}

bool is_minkowski_reduced(const SpdMatrix& y, double tol) {
  const std::size_t n = y.g();
  if (n > kMaxReductionDim) fail(ErrorKind::Unsupported, "Minkowski reduction is supported for g <= 4");
  const Mat& m = y.matrix();
  const double scale = std::max(1.0, m.diagonal().maxCoeff());
  const double t = tol * scale;
  for (std::size_t k = 0; k + 1 < n; ++k)
    if (m(k, k + 1) < -t) return false;
  for (std::size_t k = 0; k < n; ++k) {
    // Every violating a has a Y ᵗa < y_kk, so it lies in this ellipsoid
    // (and therefore inside the ball ‖a‖² ≤ y_kk / λ_min).
    for (const IntVector& x : enumerate_short_vectors(m, m(k, k), true)) {
      if (gcd_tail(x, k) != 1) continue;
      Eigen::VectorXd xv(n);
      for (std::size_t i = 0; i < n; ++i) xv(i) = static_cast<double>(x[i]);
      if (xv.dot(m * xv) < m(k, k) - t) return false;
    }
  }
  return true;
}

IwasawaBlocks partial_iwasawa(const SpdMatrix& y, std::size_t r, IwasawaVariant variant) {
  const std::size_t g = y.g();
  require(r > 0 && r < g, "partial_iwasawa: need 0 < r < g");
  const Eigen::Index ri = static_cast<Eigen::Index>(r), s = static_cast<Eigen::Index>(g - r);
  const Mat& m = y.matrix();
  const Mat y11 = m.topLeftCorner(ri, ri), y12 = m.topRightCorner(ri, s);
  const Mat y21 = m.bottomLeftCorner(s, ri), y22 = m.bottomRightCorner(s, s);
  IwasawaBlocks b;
  b.variant = variant;
  if (variant == IwasawaVariant::Lower) {
    Eigen::LLT<Mat> llt(y22);
    b.G = y22;
    b.H = llt.solve(y21);
    b.F = symmetrize(y11 - y21.transpose() * b.H);
  } else {
    Eigen::LLT<Mat> llt(y11);
    b.F = y11;
    b.H = llt.solve(y12);
    b.G = symmetrize(y22 - y12.transpose() * b.H);
  }
  return b;
}

double volume_density(const SpdMatrix& y, std::size_t h) {
  const double expo = -0.5 * static_cast<double>(y.g() + h + 1);
  return std::pow(y.det(), expo);
}

double metric_norm(const SpdMatrix& y, const Mat& u) {
  require(u.rows() == u.cols() && static_cast<std::size_t>(u.rows()) == y.g(), "metric_norm: shape mismatch");
  require(max_abs(u - u.transpose()) <= 1e-10 * std::max(1.0, max_abs(u)), "metric_norm: U must be symmetric");
  const Mat m = Eigen::LLT<Mat>(y.matrix()).solve(u);
  return (m * m).trace();
}

namespace {

// Symmetrized partial derivative ((1+δ_jk)/2) ∂φ/∂y_jk by a central difference.
template <class Fn>
auto sym_partial(const Fn& phi, const Mat& y, Eigen::Index j, Eigen::Index k, double h)
    -> std::decay_t<decltype(phi(y))> {
  using R = std::decay_t<decltype(phi(y))>;
  Mat e = Mat::Zero(y.rows(), y.cols());
  e(j, k) = 1;
  e(k, j) = 1;
  const R plus = phi(y + h * e);
  const R minus = phi(y - h * e);
  R d = (plus - minus) / (2 * h);
  if (j != k) d = 0.5 * d;
  return d;
}

}  // namespace

double invariant_operator_apply(int k, const SpdFunction& f, const SpdMatrix& y, double step) {
  require(k == 1 || k == 2, "invariant_operator_apply supports k = 1, 2");
  const Mat& ym = y.matrix();
  const Eigen::Index n = ym.rows();
  if (!(step > 1e-9 * std::max(1.0, max_abs(ym)))) fail(ErrorKind::Numerical, "finite-difference step underflow");

  auto gradient = [&](const Mat& p) {
    Mat g(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index l = j; l < n; ++l) {
        g(j, l) = sym_partial(f, p, j, l, step);
        g(l, j) = g(j, l);
      }
    return g;
  };

  if (k == 1) return (ym * gradient(ym)).trace();

  // D_2 f = Σ_{i,j,l} y_ij ∂_jl [(Y ∂f)_{li}], the outer derivative acting on the whole product.
  auto inner = [&](const Mat& p) -> Mat { return p * gradient(p); };
  double total = 0;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index l = 0; l < n; ++l) {
      const Mat t = sym_partial(inner, ym, j, l, step);
      for (Eigen::Index i = 0; i < n; ++i) total += ym(i, j) * t(l, i);
    }
  return total;
}

}  // namespace realtori
