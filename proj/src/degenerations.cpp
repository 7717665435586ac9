#include "realtori/degenerations.hpp"

#include <algorithm>
#include <cmath>

#include "realtori/linalg.hpp"

namespace realtori {

namespace {

bool cauchy(double prev, double last, double tol) { return std::abs(last - prev) <= tol * std::max(1.0, std::abs(last)); }

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double trailing_scale(const Mat& m) { return std::max(1.0, max_abs(m)); }

}  // namespace

const char* trend_name(Trend t) {
  switch (t) {
    case Trend::Convergent: return "convergent";
    case Trend::Divergent: return "divergent";
    case Trend::Undecided: return "undecided";
  }
  return "undecided";
}

void FamilySample::validate() const {
  require(xi.size() == Y.size(), "family: one parameter per sample");
  require(xi.size() >= 3, "family: at least three samples are needed");
  for (std::size_t k = 0; k < xi.size(); ++k) {
    require(std::isfinite(xi[k]) && xi[k] > 0, "family: parameters must be positive");
    if (k > 0) require(xi[k] < xi[k - 1], "family: parameters must be strictly decreasing");
    require(Y[k].g() == Y[0].g() && Y[k].g() > 0, "family: all samples must have the same size");
  }
}

DivergenceResult detect_divergence(const FamilySample& samples, const DivergenceThresholds& th) {
  samples.validate();
  require(th.cauchy_tol > 0 && th.growth_factor > 1 && th.magnitude_ratio > 0, "invalid divergence thresholds");
  const std::size_t k = samples.Y.size();
  const auto g = static_cast<Eigen::Index>(samples.Y[0].g());
  std::vector<JacobiFactors> jf;
  jf.reserve(k);
  for (const auto& y : samples.Y) jf.push_back(jacobi_decomposition(y));
  const JacobiFactors& last = jf[k - 1];
  const JacobiFactors& prev = jf[k - 2];
  const JacobiFactors& prev2 = jf[k - 3];

  DivergenceResult out;
  out.trends.assign(static_cast<std::size_t>(g), Trend::Undecided);
  std::vector<double> converged;
  for (Eigen::Index i = 0; i < g; ++i)
    if (cauchy(prev.d(i), last.d(i), th.cauchy_tol)) {
      out.trends[static_cast<std::size_t>(i)] = Trend::Convergent;
      converged.push_back(last.d(i));
    }
  const double reference = converged.empty() ? 1.0 : median(converged);
  for (Eigen::Index i = 0; i < g; ++i) {
    if (out.trends[static_cast<std::size_t>(i)] == Trend::Convergent) continue;
    const bool growing = last.d(i) >= th.growth_factor * prev.d(i) && prev.d(i) >= th.growth_factor * prev2.d(i);
    if (growing && last.d(i) >= th.magnitude_ratio * reference) out.trends[static_cast<std::size_t>(i)] = Trend::Divergent;
  }

  out.W_limit = last.W;
  out.W_converged = true;
  for (Eigen::Index i = 0; i < g; ++i)
    for (Eigen::Index j = i + 1; j < g; ++j)
      if (!cauchy(prev.W(i, j), last.W(i, j), th.cauchy_tol)) out.W_converged = false;

  std::size_t t = 0;
  while (t < out.trends.size() && out.trends[out.trends.size() - 1 - t] == Trend::Divergent) ++t;
  const std::size_t divergent = static_cast<std::size_t>(std::count(out.trends.begin(), out.trends.end(), Trend::Divergent));
  const bool any_undecided = std::find(out.trends.begin(), out.trends.end(), Trend::Undecided) != out.trends.end();

  if (any_undecided) {
    out.note = "some Jacobi direction neither converges nor grows monotonically";
    return out;
  }
  if (divergent != t) {
    out.note = "divergent Jacobi directions are not the trailing ones";
    return out;
  }
  if (!out.W_converged) {
    out.note = "W(ξ) does not converge";
    return out;
  }
  const auto lead = static_cast<Eigen::Index>(static_cast<std::size_t>(g) - t);
  const Mat& ylast = samples.Y[k - 1].matrix();
  const Mat& yprev = samples.Y[k - 2].matrix();
  for (Eigen::Index i = 0; i < g; ++i)
    for (Eigen::Index j = 0; j < lead; ++j)
      if (!cauchy(yprev(i, j), ylast(i, j), th.cauchy_tol)) {
        out.note = "entries of Y(ξ) in the leading columns do not converge";
        return out;
      }

  out.decided = true;
  out.t = t;
  out.d_limit = last.d.head(lead);
  out.Y0 = Mat::Zero(g, g);
  out.Y0.leftCols(lead) = ylast.leftCols(lead);
  return out;
}

SemiTorusLimit semi_torus_limit(const Mat& y0, std::size_t t, double tol) {
  require(y0.rows() == y0.cols() && y0.rows() > 0, "Y(0) must be square and non-empty");
  require(y0.allFinite(), "Y(0) has non-finite entries");
  const auto g = static_cast<std::size_t>(y0.rows());
  require(t <= g, "t exceeds g");
  const auto lead = static_cast<Eigen::Index>(g - t);
  require(max_abs(y0.rightCols(static_cast<Eigen::Index>(t))) <= tol * trailing_scale(y0),
          "Y(0) must vanish in its trailing t columns");
  SemiTorusLimit out;
  out.g = g;
  out.t = t;
  out.Y0 = Mat::Zero(y0.rows(), y0.cols());
  out.Y0.leftCols(lead) = y0.leftCols(lead);
  if (lead > 0) {
    out.Y_diamond = SpdMatrix(Mat(y0.topLeftCorner(lead, lead)));
    Eigen::FullPivLU<Mat> lu(out.Y0);
    lu.setThreshold(1e-12);
    out.lattice_rank = static_cast<std::size_t>(lu.rank());
  }
  return out;
}

SemiAbelianLimit semi_abelian_limit(const CMat& z0, std::size_t t, double tol) {
  require(z0.rows() == z0.cols() && z0.rows() > 0, "Z(0) must be square and non-empty");
  require(z0.allFinite(), "Z(0) has non-finite entries");
  const auto g = static_cast<std::size_t>(z0.rows());
  require(t <= g, "t exceeds g");
  const auto lead = static_cast<Eigen::Index>(g - t), tt = static_cast<Eigen::Index>(t);
  require(max_abs(z0.rightCols(tt)) <= tol * std::max(1.0, max_abs(z0)), "Z(0) must vanish in its trailing t columns");
  SemiAbelianLimit out;
  out.g = g;
  out.t = t;
  if (lead > 0) out.Z_diamond = SiegelPoint::from_complex(CMat(z0.topLeftCorner(lead, lead)));
  out.extension_rows = z0.bottomLeftCorner(tt, lead);
  return out;
}

SplittingType involution_splitting_type(const IntMatrix& s) {
  require(s.is_square() && s.rows() > 0, "involution must be a non-empty square matrix");
  const std::size_t n = s.rows();
  const IntMatrix id = IntMatrix::identity(n);
  require(s * s == id, "S² ≠ I");
  const IntMatrix plus = integer_kernel(s - id), minus = integer_kernel(s + id);
  require(plus.cols() + minus.cols() == n, "fixed and anti-fixed lattices do not span");
  IntMatrix both(n, n);
  both.set_block(0, 0, plus);
  both.set_block(0, plus.cols(), minus);
  const SmithForm snf = smith_normal_form(both);
  if (snf.rank != n) fail(ErrorKind::Internal, "L₊ ⊕ L₋ has deficient rank");
  BigInt index = 1;
  for (std::size_t i = 0; i < n; ++i) index *= abs(snf.D(i, i));
  std::size_t p = 0;
  while (index > 1 && index % 2 == 0) {
    index /= 2;
    ++p;
  }
  require(index == 1, "index [L : L₊ ⊕ L₋] is not a power of two");
  require(p <= plus.cols() && p <= minus.cols(), "index exponent exceeds the fixed-lattice ranks");
  return {plus.cols() - p, p, minus.cols() - p};
}

}  // namespace realtori
