#pragma once

#include <optional>
#include <utility>

#include "realtori/common.hpp"
#include "realtori/exact_linalg.hpp"
#include "realtori/spd_cone.hpp"

namespace realtori {

// Ω = X + iY in the Siegel upper half-space.
class SiegelPoint {
 public:
  SiegelPoint() = default;
  SiegelPoint(const Mat& x, const SpdMatrix& y, double symmetry_tol = 1e-10);
  SiegelPoint(const Mat& x, const Mat& y, double symmetry_tol = 1e-10) : SiegelPoint(x, SpdMatrix(y, symmetry_tol), symmetry_tol) {}
  static SiegelPoint from_complex(const CMat& omega, double symmetry_tol = 1e-10);
  static SiegelPoint imaginary(const SpdMatrix& y) { return SiegelPoint(Mat::Zero(y.g(), y.g()), y); }

  std::size_t g() const { return y_.g(); }
  const Mat& X() const { return x_; }
  const SpdMatrix& Y() const { return y_; }
  CMat omega() const;

 private:
  Mat x_;
  SpdMatrix y_;
};

// W in the Siegel disk: W = ᵗW and I − W̄W positive definite.
class DiskPoint {
 public:
  DiskPoint() = default;
  explicit DiskPoint(const CMat& w, double symmetry_tol = 1e-10);
  std::size_t g() const { return static_cast<std::size_t>(w_.rows()); }
  const CMat& W() const { return w_; }

 private:
  CMat w_;
};

// (M, (λ, μ; κ)) with M real symplectic (2g×2g), λ, μ real h×g, κ real h×h,
// and κ + μ ᵗλ symmetric.
struct JacobiGroupElement {
  Mat M, lambda, mu, kappa;
  void validate(double tol = 1e-10) const;
  static JacobiGroupElement identity(std::size_t g, std::size_t h);
};

SiegelPoint sp_act(const Mat& m, const SiegelPoint& omega);
SiegelPoint sp_act(const IntMatrix& m, const SiegelPoint& omega);

SiegelPoint tau_point(const SiegelPoint& omega);
Mat tau_group(const Mat& x);
IntMatrix tau_group(const IntMatrix& x);

DiskPoint cayley_to_disk(const SiegelPoint& omega);
SiegelPoint cayley_to_halfspace(const DiskPoint& w);
DiskPoint disk_act(const Mat& m, const DiskPoint& w);

// Membership in Γ*_g: (A, B; 0, ᵗA⁻¹) with A ∈ GL(g,Z), B integral, AᵗB = BᵗA.
bool is_gamma_star(const IntMatrix& gamma);
SiegelPoint gamma_star_act(const IntMatrix& gamma, const SiegelPoint& omega, double tol = 1e-9);

bool in_script_H(const SiegelPoint& omega, double tol = 1e-9);

std::pair<SiegelPoint, CMat> jacobi_group_act(const JacobiGroupElement& e, const SiegelPoint& omega, const CMat& z);
JacobiGroupElement jacobi_group_compose(const JacobiGroupElement& a, const JacobiGroupElement& b);

bool in_siegel_fundamental_set(const SiegelPoint& omega, double u);

std::pair<SiegelPoint, CMat> real_locus_embed(const SpdMatrix& y, const std::optional<Mat>& v = std::nullopt);

}  // namespace realtori
