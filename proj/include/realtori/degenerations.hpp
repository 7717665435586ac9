#pragma once

#include <optional>
#include <string>
#include <vector>

#include "realtori/common.hpp"
#include "realtori/exact_linalg.hpp"
#include "realtori/siegel.hpp"
#include "realtori/spd_cone.hpp"

namespace realtori {

// Samples Y(ξ_k) of a real family at parameters decreasing to 0. For a
// complex family Z(ξ) the caller passes Y = Im Z.
struct FamilySample {
  std::vector<double> xi;
  std::vector<SpdMatrix> Y;
  void validate() const;
};

enum class Trend { Convergent, Divergent, Undecided };
const char* trend_name(Trend t);

struct DivergenceThresholds {
  double cauchy_tol = 1e-6;       // relative change allowed between the last two samples
  double growth_factor = 4.0;     // required ratio across each of the last two steps
  double magnitude_ratio = 1e2;   // last divergent d vs. median of converged d's
};

struct DivergenceResult {
  bool decided = false;
  std::size_t t = 0;
  std::vector<Trend> trends;  // one per Jacobi index
  Vec d_limit;                // converged d_i, i ≤ g − t
  Mat W_limit;                // W at the last sample
  bool W_converged = false;
  Mat Y0;                     // leading g − t columns of the last sample, zeros after
  std::string note;
};

DivergenceResult detect_divergence(const FamilySample& samples, const DivergenceThresholds& thresholds = {});

struct SemiTorusLimit {
  std::size_t g = 0, t = 0;
  std::optional<SpdMatrix> Y_diamond;  // empty when t = g
  Mat Y0;
  std::size_t lattice_rank = 0;  // rank of Λ₀ = Z^g Y(0)
};

// Y0 must vanish in its trailing t columns and have an SPD leading block.
SemiTorusLimit semi_torus_limit(const Mat& y0, std::size_t t, double tol = 1e-12);

struct SemiAbelianLimit {
  std::size_t g = 0, t = 0;
  std::optional<SiegelPoint> Z_diamond;  // empty when t = g
  CMat extension_rows;                   // t × (g − t): rows g−t+1, …, g of the leading columns
};

SemiAbelianLimit semi_abelian_limit(const CMat& z0, std::size_t t, double tol = 1e-12);

// Counts (s', p, t') of the blocks I, B = (0 1; 1 0), −I in the integral
// normal form of an involution S, so that s' + 2p + t' = size.
struct SplittingType {
  std::size_t s_prime = 0, p = 0, t_prime = 0;
  bool operator==(const SplittingType&) const = default;
};

SplittingType involution_splitting_type(const IntMatrix& s);

}  // namespace realtori
