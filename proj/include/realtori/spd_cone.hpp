#pragma once

#include <functional>
#include <vector>

#include "realtori/common.hpp"
#include "realtori/exact_linalg.hpp"

namespace realtori {

// A point of the cone of positive definite symmetric matrices.
// Symmetry is enforced exactly by mirroring the upper triangle; positivity
// is certified by a successful Cholesky factorization.
class SpdMatrix {
 public:
  SpdMatrix() = default;
  explicit SpdMatrix(const Mat& y, double symmetry_tol = 1e-10);
  static SpdMatrix identity(std::size_t g) { return SpdMatrix(Mat::Identity(g, g)); }

  std::size_t g() const { return static_cast<std::size_t>(y_.rows()); }
  const Mat& matrix() const { return y_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return y_(i, j); }
  double det() const;
  Mat inverse() const;

 private:
  Mat y_;
};

// Y = ᵗW · diag(d) · W with W unit upper triangular.
struct JacobiFactors {
  Mat W;
  Vec d;
  Mat recompose() const { return W.transpose() * d.asDiagonal() * W; }
};

enum class IwasawaVariant { Lower, Upper };

// Lower variant (r = size of the first block, s = g - r):
//   Y = [[F + ᵗH G H, ᵗH G], [G H, G]],  F: r×r, G: s×s, H: s×r.
// Upper variant, written with the same fields (F ≡ P, G ≡ Q, H ≡ R, H is r×s):
//   Y = [[P, P R], [ᵗR P, ᵗR P R + Q]].
struct IwasawaBlocks {
  Mat F, G, H;
  IwasawaVariant variant = IwasawaVariant::Lower;
  Mat recompose() const;
};

struct MinkowskiResult {
  SpdMatrix R;
  IntMatrix A;  // R = A Y ᵗA
};

using IntVector = std::vector<long long>;

SpdMatrix gl_act(const Mat& a, const SpdMatrix& y);
JacobiFactors jacobi_decomposition(const SpdMatrix& y);

// All nonzero integer x (row vectors) with x Y ᵗx <= bound, by Fincke–Pohst
// enumeration. Only one of ±x is reported when `half` is set (first nonzero
// entry positive). Throws Numerical once more than `node_cap` tree nodes are visited.
std::vector<IntVector> enumerate_short_vectors(const Mat& y, double bound, bool half = false,
                                               std::size_t node_cap = 20'000'000);

// All B in GL(g,Z) with ‖B·R1·ᵗB − R2‖_max <= tol. Rows of B are drawn from the
// short vectors of R1 matching the diagonal of R2, then matched on the
// off-diagonal entries by backtracking. `complete` is false when a cap was hit.
struct IsometrySearch {
  std::vector<IntMatrix> maps;
  bool complete = true;
  std::size_t candidates = 0;
};
IsometrySearch find_isometries(const Mat& r1, const Mat& r2, double tol, std::size_t max_maps = 4096,
                               std::size_t node_cap = 2'000'000);

constexpr std::size_t kMaxReductionDim = 4;

MinkowskiResult minkowski_reduce(const SpdMatrix& y);
bool is_minkowski_reduced(const SpdMatrix& y, double tol = 1e-10);

IwasawaBlocks partial_iwasawa(const SpdMatrix& y, std::size_t r, IwasawaVariant variant = IwasawaVariant::Lower);

double volume_density(const SpdMatrix& y, std::size_t h);
double metric_norm(const SpdMatrix& y, const Mat& u);

using SpdFunction = std::function<double(const Mat&)>;
// D_k f at Y for k in {1, 2}, with the symmetrized derivative and nested
// central differences of width `step`.
double invariant_operator_apply(int k, const SpdFunction& f, const SpdMatrix& y, double step = 1e-4);

}  // namespace realtori
