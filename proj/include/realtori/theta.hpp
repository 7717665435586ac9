#pragma once

#include <functional>
#include <string>
#include <vector>

#include "realtori/common.hpp"
#include "realtori/spd_cone.hpp"

namespace realtori {

// Semi-character on a lattice with basis ℓ_1..ℓ_n, stored by its basis
// values. E is the alternating integral Gram matrix of the pairing.
// On n = Σ n_k ℓ_k:  α(n) = ∏ α(ℓ_k)^{n_k} · e^{πi Σ_{j<k} n_j n_k E_jk}.
class SemiCharacter {
 public:
  SemiCharacter() = default;
  SemiCharacter(std::vector<Complex> basis_values, const Mat& e);
  std::size_t rank() const { return values_.size(); }
  const std::vector<Complex>& basis_values() const { return values_; }
  const Mat& E() const { return e_; }
  Complex operator()(const IntVector& n) const;

 private:
  std::vector<Complex> values_;
  Mat e_;
  std::vector<std::vector<long long>> e_int_;
};

// α_Y(κ + iYλ) = e^{πi E_Y(κ, iYλ)} = e^{−πi ᵗκ Y⁻¹ (Yλ)}.
Complex canonical_semicharacter(const SpdMatrix& y, const IntVector& kappa, const IntVector& lambda_int);

// max |α(a+b) − α(a)α(b)e^{πi ᵗaEb}| over `trials` random coordinate pairs with entries in [−3, 3].
using LatticeFunction = std::function<Complex(const IntVector&)>;
double semicharacter_check(const LatticeFunction& alpha, const Mat& e, int trials = 200, unsigned long long seed = 1);
double semicharacter_check(const SemiCharacter& alpha, int trials = 200, unsigned long long seed = 1);

// Data for θ_{B,ρ}: lattice Λ = Pi·Z^g, symmetric positive definite B, and a
// character ρ given by its (unit) values on the columns of Pi.
struct ThetaSpec {
  Mat Pi;
  Mat B;
  std::vector<Complex> rho;
  void validate() const;
  std::size_t g() const { return static_cast<std::size_t>(Pi.rows()); }
  Complex character(const IntVector& n) const;
};

// Line-bundle data over the associated complex torus C^g/(Z^g + iΠZ^g):
// hermitian form H(x, y) = ᵗx·H·ȳ and a semi-character on the basis
// (e_1..e_g, iΠe_1..iΠe_g).
struct LineBundleSpec {
  Mat Pi;
  CMat H;
  SemiCharacter alpha;
  std::size_t g() const { return static_cast<std::size_t>(Pi.rows()); }
};

// Canonical data of a principally polarized torus Λ_Y = YZ^g: H_Y = Y⁻¹, α = α_Y.
LineBundleSpec canonical_line_bundle_data(const SpdMatrix& y);

// θ-spec of the section θ_{Y,α}: B = Re H on R^g, ρ(λ) = α(2iλ).
ThetaSpec section_theta_spec(const LineBundleSpec& bundle);

enum class FactorKind { J_H_alpha, I_B_rho, I_alpha_Lambda, I_B_Lambda_alpha_Lambda };
FactorKind parse_factor_kind(const std::string& name);
const char* factor_kind_name(FactorKind kind);

// α(ℓ) e^{(π/2)H(ℓ,ℓ) + πH(z,ℓ)} for ℓ with integer coordinates in the basis of the complex lattice.
Complex factor_J(const LineBundleSpec& s, const IntVector& ell, const CVec& z);
// ρ(λ) e^{πB(λ,λ) + 2πB(v,λ)}, λ = Pi·lambda_int.
Complex factor_I_B_rho(const ThetaSpec& s, const IntVector& lambda_int, const Vec& v);
// α(iλ) e^{(π/2)H(λ,λ) + πH(v,λ)}.
Complex factor_I_alpha(const LineBundleSpec& s, const IntVector& lambda_int, const Vec& v);
// α(2iλ) e^{πB(λ,λ) + 2πB(v,λ)} with B = Re H restricted to R^g.
Complex factor_I_B_alpha(const LineBundleSpec& s, const IntVector& lambda_int, const Vec& v);

struct LatticeSum {
  Complex value;
  double tail_bound = 0;  // bound on the discarded terms (absolute)
  int radius = 0;         // ‖n‖∞ ≤ radius around the centre
  double eps = 0;
};

constexpr int kThetaMaxRadius = 60;

// θ_{B,ρ}(v) = Σ_λ ρ(λ)⁻¹ e^{−πB(λ,λ) − 2πB(v,λ)}. With reduce_cell, v is
// first moved into the cell Pi·[−½,½)^g and the translate re-applied through
// θ(v0 + λ) = I_{B,ρ}(λ, v0) θ(v0); `eps` then bounds the tail of the cell
// sum. Without it, the sum is centred at −Pi⁻¹v and eps is relative to the
// Gaussian envelope e^{π·ᵗc G c}.
LatticeSum theta_eval(const ThetaSpec& s, const Vec& v, double eps = 1e-12, bool reduce_cell = true);

// |θ(v+λ) − I(λ,v)θ(v)| / max(1, |I(λ,v)θ(v)|), both sides by centred direct summation at eps 1e-13.
double theta_transform_residual(const ThetaSpec& s, const IntVector& lambda_int, const Vec& v);

// f_{B,ρ}(v) = Σ_λ ρ(λ) e^{−πB(λ,λ) + 2πiB(v,λ)}; requires B integral on Λ×Λ.
LatticeSum periodic_function_eval(const ThetaSpec& s, const Vec& v, double eps = 1e-12);

}  // namespace realtori
