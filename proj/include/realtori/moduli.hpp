#pragma once

#include <utility>
#include <vector>

#include "realtori/common.hpp"
#include "realtori/exact_linalg.hpp"
#include "realtori/siegel.hpp"
#include "realtori/spd_cone.hpp"

namespace realtori {

// (λ, i): λ = rank of N mod 2, i = π(N) = ∏(1 − n_kk) in GF(2).
struct ModuliInvariant {
  int lambda = 0;
  int i = 1;
  bool operator==(const ModuliInvariant&) const = default;
  auto operator<=>(const ModuliInvariant&) const = default;
};

// Case (I) "diasymmetric" when i = 0, case (II) "orthosymmetric" when i = 1.
inline const char* standard_form_name(const ModuliInvariant& inv) { return inv.i == 0 ? "I" : "II"; }

ModuliInvariant mod2_invariants(const Gf2Matrix& n);

// The standard form I_λ⊕0 or H_λ⊕0 for the given invariant (H_λ antidiagonal).
Gf2Matrix mod2_standard_matrix(std::size_t g, const ModuliInvariant& inv);

struct Mod2StandardForm {
  Gf2Matrix S;
  Gf2Matrix A;  // A·N·ᵗA = S
  ModuliInvariant invariant;
};
Mod2StandardForm mod2_standard_form(const Gf2Matrix& n);

std::vector<ModuliInvariant> valid_invariants(int g);

bool stabilizer_mod2_member(const IntMatrix& a, const IntMatrix& m);

// A unimodular integer matrix reducing to the given invertible GF(2) matrix.
IntMatrix lift_gf2_to_unimodular(const Gf2Matrix& a);

// Σ_M = (−M, I; −(I+M²), M); requires M symmetric with M³ = M.
IntMatrix sigma_M_matrix(const IntMatrix& m);

// Σ_M(½M + iY) = ½M + i·D·Y⁻¹·D with D = (I + M²)⁻¹ = I − ½M².
SiegelPoint sigma_involution_image(const IntMatrix& m, const SpdMatrix& y);

// M_σ = (−I, 0; 2X, I) for Ω in script-H_g.
IntMatrix real_structure_matrix(const SiegelPoint& omega, double tol = 1e-9);

// Moduli component of a point of script-H_g, together with a Γ*_g element
// moving Ω to ½·standard_M + i·Y'.
struct ModuliClass {
  ModuliInvariant invariant;
  IntMatrix standard_M;
  SpdMatrix reduced_Y;    // Minkowski reduction of Im Ω
  IntMatrix normalizer;   // γ ∈ Γ*_g with Re(γ·Ω) = ½·standard_M
};
ModuliClass moduli_class(const SiegelPoint& omega, double tol = 1e-9);

// Witness A ∈ GL(g,Z) with A·Y1·ᵗA = Y2.
EquivalenceResult<IntMatrix> polarized_tori_equivalent(const SpdMatrix& y1, const SpdMatrix& y2, double tol = 1e-9);

// Witness γ ∈ Γ*_g with γ·Ω1 = Ω2.
EquivalenceResult<IntMatrix> real_ppav_equivalent(const SiegelPoint& omega1, const SiegelPoint& omega2,
                                                  double tol = 1e-9);

}  // namespace realtori
