#pragma once

#include <optional>
#include <string>

#include "realtori/common.hpp"
#include "realtori/exact_linalg.hpp"
#include "realtori/siegel.hpp"

namespace realtori {

// Which arithmetic group a cocycle value is declared to live in:
//   Full        Γ_g = Sp(2g, Z)
//   Principal   Γ_g(N) = {γ ≡ I mod N}
//   Level2m     Γ_g(2, 2m) = {A, D ≡ I mod 2;  B, C ≡ 0 mod 2m}
struct GroupTag {
  enum class Kind { Full, Principal, Level2m };
  Kind kind = Kind::Full;
  long long n = 1;  // N for Principal, m for Level2m

  static GroupTag full() { return {}; }
  static GroupTag principal(long long level) { return {Kind::Principal, level}; }
  static GroupTag level_2_2m(long long m) { return {Kind::Level2m, m}; }
  std::string name() const;
};

bool in_principal_congruence(const IntMatrix& gamma, long long level);
bool in_gamma_2_2m(const IntMatrix& gamma, long long m);
// Symplectic, integral and satisfying the tag's congruences.
bool in_group(const IntMatrix& gamma, const GroupTag& tag);

struct CocycleDatum {
  IntMatrix gamma;  // the image of τ
  GroupTag tag;
  void validate() const;
};

// γ·τ(γ) = I exactly. Non-symplectic input is not a cocycle.
bool is_cocycle(const IntMatrix& gamma);

struct CoboundarySearch {
  std::optional<IntMatrix> h;  // τ(h)·h⁻¹ = γ, verified exactly
  std::size_t elements_visited = 0;
  int depth_reached = 0;
  bool capped = false;  // stopped by max_elements before finishing the depth
};

// Breadth-first search over Sp(2g, Z) elements reachable by words of length
// ≤ max_word_length in the standard generators. When the tag is not Full,
// h is additionally required to lie in the tagged group.
CoboundarySearch coboundary_witness(const IntMatrix& gamma, int max_word_length, const GroupTag& tag = {},
                                    std::size_t max_elements = 400'000);

// Ω ↦ τ(γ·Ω) = −conj(γ·Ω).
SiegelPoint twisted_involution_point(const Mat& gamma, const SiegelPoint& omega);
SiegelPoint twisted_involution_point(const IntMatrix& gamma, const SiegelPoint& omega);

// ‖γ·Ω + conj(Ω)‖_max ≤ tol.
bool fixed_locus_member(const Mat& gamma, const SiegelPoint& omega, double tol = 1e-10);
bool fixed_locus_member(const IntMatrix& gamma, const SiegelPoint& omega, double tol = 1e-10);

}  // namespace realtori
