#pragma once

#include <optional>

#include "realtori/common.hpp"
#include "realtori/exact_linalg.hpp"
#include "realtori/spd_cone.hpp"

namespace realtori {

// T = R^g / Pi·Z^g.
class RealTorus {
 public:
  RealTorus() = default;
  explicit RealTorus(const Mat& pi, bool principally_polarized = false);

  std::size_t g() const { return static_cast<std::size_t>(pi_.rows()); }
  const Mat& Pi() const { return pi_; }
  bool principally_polarized() const { return polarized_; }

 private:
  Mat pi_;
  bool polarized_ = false;
};

// Lattice basis of A = C^g / (Z^g + iΛ): the 2g columns of (I_g, i·Pi).
struct AssociatedComplexTorus {
  CMat basis;  // g × 2g
};

RealTorus torus_from_spd(const SpdMatrix& y);
AssociatedComplexTorus associated_complex_torus(const RealTorus& t);

// H_Y(x, y) = ᵗx Y⁻¹ ȳ.
Complex hermitian_form_eval(const SpdMatrix& y, const CVec& x, const CVec& w);

RealTorus dual_period_matrix(const RealTorus& t);

// Integer R with Pi'·R = Phi·Pi (to tol), or nullopt when Phi does not map Λ into Λ'.
std::optional<IntMatrix> rational_representation(const Mat& phi, const RealTorus& t, const RealTorus& t2,
                                                 double tol = 1e-8);

// |det R|, which is 0 for a non-isogeny.
BigInt isogeny_degree(const IntMatrix& r);

enum class Polarization { Polarized, NotPolarized };
inline const char* polarization_name(Polarization p) {
  return p == Polarization::Polarized ? "POLARIZED" : "NOT_POLARIZED";
}

// Decided only for symmetric period matrices, where definiteness settles it.
Polarization is_polarized_symmetric(const Mat& pi, double sym_tol = 1e-10);

}  // namespace realtori
