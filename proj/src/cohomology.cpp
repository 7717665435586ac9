#include "realtori/cohomology.hpp"

#include <set>
#include <vector>

#include "realtori/linalg.hpp"

namespace realtori {

namespace {

bool congruent(const BigInt& a, const BigInt& b, long long mod) {
  BigInt r = (a - b) % mod;
  return r == 0;
}

// Translations (I, ±S; 0, I), ±J and (A, 0; 0, ᵗA⁻¹) for elementary A.
std::vector<IntMatrix> standard_generators(std::size_t g) {
  std::vector<IntMatrix> gens;
  const IntMatrix id = IntMatrix::identity(g);
  for (std::size_t i = 0; i < g; ++i)
    for (std::size_t j = i; j < g; ++j)
      for (int sign : {1, -1}) {
        IntMatrix s(g, g);
        s(i, j) = sign;
        s(j, i) = sign;
        gens.push_back(block_matrix(id, s, IntMatrix(g, g), id));
      }
  gens.push_back(symplectic_J(g));
  gens.push_back(-symplectic_J(g));
  for (std::size_t i = 0; i < g; ++i)
    for (std::size_t j = 0; j < g; ++j) {
      if (i == j) {
        IntMatrix a = id;
        a(i, i) = -1;
        gens.push_back(block_matrix(a, IntMatrix(g, g), IntMatrix(g, g), a));
        continue;
      }
      for (int sign : {1, -1}) {
        IntMatrix a = id;
        a(i, j) = sign;
        gens.push_back(block_matrix(a, IntMatrix(g, g), IntMatrix(g, g), unimodular_inverse(a).transpose()));
      }
    }
  return gens;
}

void check_square_even(const IntMatrix& m) {
  require(m.is_square() && m.rows() > 0 && m.rows() % 2 == 0, "group element must be a non-empty 2g×2g matrix");
}

}  // namespace

std::string GroupTag::name() const {
  switch (kind) {
    case Kind::Full: return "Gamma_g";
    case Kind::Principal: return "Gamma_g(" + std::to_string(n) + ")";
    case Kind::Level2m: return "Gamma_g(2," + std::to_string(2 * n) + ")";
  }
  return "Gamma_g";
}

bool in_principal_congruence(const IntMatrix& gamma, long long level) {
  require(level >= 1, "congruence level must be positive");
  check_square_even(gamma);
  if (!is_symplectic(gamma)) return false;
  for (std::size_t i = 0; i < gamma.rows(); ++i)
    for (std::size_t j = 0; j < gamma.cols(); ++j)
      if (!congruent(gamma(i, j), i == j ? 1 : 0, level)) return false;
  return true;
}

bool in_gamma_2_2m(const IntMatrix& gamma, long long m) {
  require(m >= 1, "m must be positive");
  check_square_even(gamma);
  if (!is_symplectic(gamma)) return false;
  const std::size_t g = gamma.rows() / 2;
  for (std::size_t i = 0; i < 2 * g; ++i)
    for (std::size_t j = 0; j < 2 * g; ++j) {
      const bool diagonal_block = (i < g) == (j < g);
      if (diagonal_block) {
        if (!congruent(gamma(i, j), i == j ? 1 : 0, 2)) return false;
      } else if (!congruent(gamma(i, j), 0, 2 * m)) {
        return false;
      }
    }
  return true;
}

bool in_group(const IntMatrix& gamma, const GroupTag& tag) {
  switch (tag.kind) {
    case GroupTag::Kind::Full: check_square_even(gamma); return is_symplectic(gamma);
    case GroupTag::Kind::Principal: return in_principal_congruence(gamma, tag.n);
    case GroupTag::Kind::Level2m: return in_gamma_2_2m(gamma, tag.n);
  }
  return false;
}

void CocycleDatum::validate() const {
  require(in_group(gamma, tag), "γ is not in the declared group " + tag.name());
}

bool is_cocycle(const IntMatrix& gamma) {
  check_square_even(gamma);
  if (!is_symplectic(gamma)) return false;
  return gamma * tau_group(gamma) == IntMatrix::identity(gamma.rows());
}

CoboundarySearch coboundary_witness(const IntMatrix& gamma, int max_word_length, const GroupTag& tag,
                                    std::size_t max_elements) {
  require(max_word_length >= 0, "word length bound must be non-negative");
  require(is_cocycle(gamma), "γ is not a cocycle (γ·τ(γ) ≠ I)");
  const std::size_t g = gamma.rows() / 2;
  const std::vector<IntMatrix> gens = standard_generators(g);

  CoboundarySearch out;
  // τ(h)·h⁻¹ = γ  ⟺  τ(h) = γ·h.
  auto accept = [&](const IntMatrix& h) {
    if (tau_group(h) != gamma * h || !in_group(h, tag)) return false;
    out.h = h;
    return true;
  };

  std::set<IntMatrix> seen;
  std::vector<IntMatrix> layer{IntMatrix::identity(2 * g)};
  seen.insert(layer.front());
  out.elements_visited = 1;
  if (accept(layer.front())) return out;
  for (int depth = 1; depth <= max_word_length; ++depth) {
    std::vector<IntMatrix> next;
    for (const IntMatrix& w : layer)
      for (const IntMatrix& s : gens) {
        IntMatrix h = w * s;
        if (!seen.insert(h).second) continue;
        if (out.elements_visited >= max_elements) {
          out.capped = true;
          return out;
        }
        ++out.elements_visited;
        if (accept(h)) {
          out.depth_reached = depth;
          return out;
        }
        next.push_back(std::move(h));
      }
    layer = std::move(next);
    out.depth_reached = depth;
  }
  return out;
}

SiegelPoint twisted_involution_point(const Mat& gamma, const SiegelPoint& omega) {
  return tau_point(sp_act(gamma, omega));
}

SiegelPoint twisted_involution_point(const IntMatrix& gamma, const SiegelPoint& omega) {
  return tau_point(sp_act(gamma, omega));
}

bool fixed_locus_member(const Mat& gamma, const SiegelPoint& omega, double tol) {
  const SiegelPoint moved = sp_act(gamma, omega);
  return max_abs(moved.omega() + omega.omega().conjugate()) <= tol;
}

bool fixed_locus_member(const IntMatrix& gamma, const SiegelPoint& omega, double tol) {
  return fixed_locus_member(to_real(gamma), omega, tol);
}

}  // namespace realtori
