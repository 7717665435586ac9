#pragma once

#include <optional>

#include "realtori/common.hpp"
#include "realtori/exact_linalg.hpp"

namespace realtori {

// An extension 0 → T₁ → E → T₂ → 0 given by the block period matrix
// (Π̃₁, σ; 0, Π̃₂) with Π̃ᵢ = (I, Πᵢ) and σ a complex g₁×2g₂ matrix.
class ExtensionDatum {
 public:
  ExtensionDatum() = default;
  ExtensionDatum(const CMat& pi1, const CMat& pi2, const CMat& sigma);

  std::size_t g1() const { return static_cast<std::size_t>(pi1_.rows()); }
  std::size_t g2() const { return static_cast<std::size_t>(pi2_.rows()); }
  const CMat& Pi1() const { return pi1_; }
  const CMat& Pi2() const { return pi2_; }
  const CMat& sigma() const { return sigma_; }

  // (σ₁, σ₂): the first and last g₂ columns of σ.
  CMat sigma1() const { return sigma_.leftCols(pi2_.rows()); }
  CMat sigma2() const { return sigma_.rightCols(pi2_.rows()); }

  static ExtensionDatum trivial(const CMat& pi1, const CMat& pi2);
  static ExtensionDatum from_normal_form(const CMat& pi1, const CMat& pi2, const CMat& alpha);

 private:
  CMat pi1_, pi2_, sigma_;
};

// Exact counterpart with rational real period matrices and σ = σ_re + i·σ_im.
struct RationalExtension {
  RatMatrix Pi1, Pi2, sigma_re, sigma_im;

  void validate() const;
  ExtensionDatum to_float() const;
};

// α = σ₂ − σ₁Π₂, the representative (0, α) of the same class.
CMat ext_normal_form(const ExtensionDatum& e);

ExtensionDatum ext_add(const ExtensionDatum& a, const ExtensionDatum& b);

// f*(e) for f: T₂' → T₂ with rational representation R (2g₂ × 2g₂'): σ ↦ σR.
// new_pi2 is the period matrix of T₂'; it may be omitted when g₂' = g₂.
ExtensionDatum ext_pullback(const ExtensionDatum& e, const IntMatrix& r,
                            const std::optional<CMat>& new_pi2 = std::nullopt);

// h_*(e) for h: T₁ → T₁' with analytic representation A (g₁' × g₁): σ ↦ Aσ.
ExtensionDatum ext_pushforward(const ExtensionDatum& e, const CMat& a,
                               const std::optional<CMat>& new_pi1 = std::nullopt);

// (I, Π₁)·M·(Π₂; I) for an integer 2g₁×2g₂ matrix M.
CMat ext_lattice_element(const CMat& pi1, const CMat& pi2, const IntMatrix& m);

struct ExtEquivalenceOptions {
  long long bound = 10;
  double tol = 1e-9;
  std::size_t max_candidates = 20'000'000;
};

// Decides whether α(e') − α(e) = (I, Π₁)M(Π₂; I) for an integer M, which is
// returned as the witness. The float path searches |M| ≤ bound and cannot
// refute membership unless the imaginary parts are incompatible.
EquivalenceResult<IntMatrix> ext_equivalent(const ExtensionDatum& a, const ExtensionDatum& b,
                                            const ExtEquivalenceOptions& opts = {});

// Exact decision by clearing denominators and solving over Z.
EquivalenceResult<IntMatrix> ext_equivalent(const RationalExtension& a, const RationalExtension& b);

// ‖A·Π̃ − Π̃'·R‖_max for full period matrices Π̃ (g×2g) and Π̃' (g'×2g').
double hom_compatibility_check(const CMat& a, const IntMatrix& r, const CMat& pt1, const CMat& pt2);

}  // namespace realtori
