#pragma once

#include "realtori/common.hpp"
#include "realtori/spd_cone.hpp"

namespace realtori {

// A point (Y, V) of P_g × R^(h,g).
struct MinkowskiEuclidPoint {
  SpdMatrix Y;
  Mat V;  // h × g
  std::size_t g() const { return Y.g(); }
  std::size_t h() const { return static_cast<std::size_t>(V.rows()); }
  void validate() const;
};

// (A, a) ∈ GL_{g,h} with (A,a)·(B,b) = (AB, a·ᵗB⁻¹ + b).
struct GroupElementGLgh {
  Mat A;
  Mat a;  // h × g
  void validate() const;
};

GroupElementGLgh glgh_compose(const GroupElementGLgh& x, const GroupElementGLgh& y);

// (A,a)·(Y,V) = (A·Y·ᵗA, (V + a)·ᵗA).
MinkowskiEuclidPoint glgh_act(const GroupElementGLgh& x, const MinkowskiEuclidPoint& p);

// A_c·tr(Y⁻¹dY·Y⁻¹dY) + B_c·tr(Y⁻¹·ᵗdV·dV).
double metric_value(const MinkowskiEuclidPoint& p, const Mat& dY, const Mat& dV, double a_c, double b_c);

struct JacobianCheck {
  double numeric = 0;
  double analytic = 0;
  double relative_error = 0;
};
// Central-difference Jacobian determinant of (Y,V) ↦ (A,0)·(Y,V) in the
// coordinates (y_μν, μ ≤ ν; v_kl) at `probe`, against |det A|^{g+h+1}.
JacobianCheck volume_jacobian_check(const Mat& a, const MinkowskiEuclidPoint& probe, double step = 1e-3);

// γ(t) = (ᵗk·λ(2t)·k, Z·ᵗk·(∫₀ᵗ λ(t−s) ds)·k) with λ(t) = diag(e^{λ_j t}).
MinkowskiEuclidPoint geodesic_through_origin(const Mat& k, const Vec& lambdas, const Mat& z, double t);

struct DistanceResult {
  double distance = 0;
  double spd_term = 0;       // A_c·(Σ ln² t_j)^{1/2}
  double euclid_term = 0;    // B_c·∫₀¹ (Σ Δ_j e^{−(ln t_j)s})^{1/2} ds
  Vec t;                     // generalized eigenvalues of (Y1, Y0), ascending
  Mat whitening;             // g with g·Y0·ᵗg = I and g·Y1·ᵗg = diag(t)
  Vec delta;                 // Δ_j
  double pencil_residual = 0;  // max_j |det(t_j Y0 − Y1)|
  int quadrature_panels = 0;
};
DistanceResult distance(const MinkowskiEuclidPoint& p0, const MinkowskiEuclidPoint& p1, double a_c = 1, double b_c = 1);

bool in_fundamental_set(const MinkowskiEuclidPoint& p, double tol = 1e-10);

}  // namespace realtori
