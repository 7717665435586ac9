#include "realtori/moduli.hpp"

#include <bit>
#include <cmath>

#include "realtori/linalg.hpp"

namespace realtori {

namespace {

using Bits = std::uint64_t;

// Bilinear form xNᵗy over GF(2) for row bit-vectors.
bool form(const Gf2Matrix& n, Bits x, Bits y) {
  bool acc = false;
  for (std::size_t i = 0; i < n.rows(); ++i)
    if ((x >> i) & 1u) acc ^= static_cast<bool>(std::popcount(n.row_bits(i) & y) & 1);
  return acc;
}

// Basis of {x : x N = 0} followed by a complement, as row bit-vectors.
std::pair<std::vector<Bits>, std::vector<Bits>> radical_and_complement(const Gf2Matrix& n) {
  const std::size_t g = n.rows();
  // Row-reduce [N | I]; rows whose N-part vanishes give the left kernel.
  std::vector<Bits> left(g), right(g);
  for (std::size_t i = 0; i < g; ++i) {
    left[i] = n.row_bits(i);
    right[i] = Bits{1} << i;
  }
  std::size_t rank = 0;
  for (std::size_t col = 0; col < g && rank < g; ++col) {
    std::size_t piv = rank;
    while (piv < g && !((left[piv] >> col) & 1u)) ++piv;
    if (piv == g) continue;
    std::swap(left[piv], left[rank]);
    std::swap(right[piv], right[rank]);
    for (std::size_t r = 0; r < g; ++r)
      if (r != rank && ((left[r] >> col) & 1u)) {
        left[r] ^= left[rank];
        right[r] ^= right[rank];
      }
    ++rank;
  }
  std::vector<Bits> radical(right.begin() + static_cast<std::ptrdiff_t>(rank), right.end());
  // Complement: unit vectors independent of the span, kept in reduced echelon
  // form keyed by leading bit.
  std::vector<Bits> span, complement;
  auto reduce = [&](Bits v) {
    for (Bits b : span) {
      const int lead = std::bit_width(b) - 1;
      if ((v >> lead) & 1u) v ^= b;
    }
    return v;
  };
  auto insert = [&](Bits v) {
    for (Bits& b : span) {
      const int lead = std::bit_width(v) - 1;
      if ((b >> lead) & 1u) b ^= v;
    }
    span.push_back(v);
  };
  for (Bits r : radical) {
    Bits v = reduce(r);
    if (v) insert(v);
  }
  for (std::size_t i = 0; i < g && complement.size() + radical.size() < g; ++i) {
    Bits v = reduce(Bits{1} << i);
    if (v) {
      insert(v);
      complement.push_back(Bits{1} << i);
    }
  }
  return {radical, complement};
}

Gf2Matrix from_rows(const std::vector<Bits>& rows, std::size_t g) {
  Gf2Matrix a(g, g);
  for (std::size_t i = 0; i < g; ++i) a.set_row_bits(i, rows[i]);
  return a;
}

void require_square_symmetric(const Gf2Matrix& n) {
  require(n.rows() == n.cols() && n.rows() > 0 && n.rows() <= 64, "GF(2) matrix must be square of size 1..64");
  require(n.is_symmetric(), "GF(2) matrix must be symmetric");
}

}  // namespace

ModuliInvariant mod2_invariants(const Gf2Matrix& n) {
  require_square_symmetric(n);
  ModuliInvariant inv;
  inv.lambda = static_cast<int>(gf2_rank(n));
  inv.i = 1;
  for (std::size_t k = 0; k < n.rows(); ++k)
    if (n.get(k, k)) inv.i = 0;
  return inv;
}

Gf2Matrix mod2_standard_matrix(std::size_t g, const ModuliInvariant& inv) {
  const auto lam = static_cast<std::size_t>(inv.lambda);
  require(lam <= g, "λ exceeds g");
  Gf2Matrix s(g, g);
  for (std::size_t k = 0; k < lam; ++k) {
    if (inv.i == 0)
      s.set(k, k, true);
    else
      s.set(k, lam - 1 - k, true);
  }
  return s;
}

Mod2StandardForm mod2_standard_form(const Gf2Matrix& n) {
  require_square_symmetric(n);
  const std::size_t g = n.rows();
  const ModuliInvariant inv = mod2_invariants(n);
  auto [radical, rest] = radical_and_complement(n);
  std::vector<Bits> head;

  if (inv.i == 0) {
    // Orthonormal basis of the nondegenerate part. q(x) = N(x,x) is additive,
    // so an alternating remainder is handled with the last orthonormal e:
    // (e, x, y) with N(x,y) = 1 becomes e+x, e+y, e+x+y.
    std::vector<Bits> ortho;
    while (!rest.empty()) {
      std::size_t pick = rest.size();
      for (std::size_t k = 0; k < rest.size(); ++k)
        if (form(n, rest[k], rest[k])) {
          pick = k;
          break;
        }
      if (pick < rest.size()) {
        const Bits e = rest[pick];
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(pick));
        for (Bits& v : rest)
          if (form(n, v, e)) v ^= e;
        ortho.push_back(e);
        continue;
      }
      if (ortho.empty()) fail(ErrorKind::Internal, "non-alternating form lost its anisotropic vector");
      const Bits x = rest.front();
      std::size_t yi = 1;
      while (yi < rest.size() && !form(n, x, rest[yi])) ++yi;
      if (yi == rest.size()) fail(ErrorKind::Internal, "degenerate remainder in mod-2 reduction");
      const Bits y = rest[yi];
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(yi));
      rest.erase(rest.begin());
      for (Bits& v : rest) {
        const bool vx = form(n, v, x), vy = form(n, v, y);
        if (vy) v ^= x;
        if (vx) v ^= y;
      }
      const Bits e = ortho.back();
      ortho.back() = e ^ x;
      ortho.push_back(e ^ y);
      ortho.push_back(e ^ x ^ y);
    }
    head = ortho;
  } else {
    // Symplectic basis e_1..e_m, f_1..f_m, ordered e_1..e_m, f_m..f_1.
    std::vector<Bits> es, fs;
    while (!rest.empty()) {
      const Bits x = rest.front();
      std::size_t yi = 1;
      while (yi < rest.size() && !form(n, x, rest[yi])) ++yi;
      if (yi == rest.size()) fail(ErrorKind::Internal, "degenerate remainder in mod-2 reduction");
      const Bits y = rest[yi];
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(yi));
      rest.erase(rest.begin());
      for (Bits& v : rest) {
        const bool vx = form(n, v, x), vy = form(n, v, y);
        if (vy) v ^= x;
        if (vx) v ^= y;
      }
      es.push_back(x);
      fs.push_back(y);
    }
    head = es;
    head.insert(head.end(), fs.rbegin(), fs.rend());
  }

  std::vector<Bits> rows = head;
  rows.insert(rows.end(), radical.begin(), radical.end());
  Mod2StandardForm out{mod2_standard_matrix(g, inv), from_rows(rows, g), inv};
  if (!gf2_inverse(out.A) || out.A * n * out.A.transpose() != out.S)
    fail(ErrorKind::Internal, "mod-2 standard form verification failed");
  return out;
}

std::vector<ModuliInvariant> valid_invariants(int g) {
  require(g >= 1, "g must be at least 1");
  std::vector<ModuliInvariant> out;
  for (int lambda = 0; lambda <= g; ++lambda)
    for (int i = 0; i <= 1; ++i) {
      if (lambda % 2 == 1 && i == 1) continue;
      if (lambda == 0 && i == 0) continue;
      out.push_back({lambda, i});
    }
  return out;
}

bool stabilizer_mod2_member(const IntMatrix& a, const IntMatrix& m) {
  require(a.is_square() && is_unimodular(a), "A must be unimodular");
  require(m.is_square() && m.rows() == a.rows() && m.is_symmetric(), "M must be symmetric of the same size");
  return Gf2Matrix::from_int(a * m * a.transpose()) == Gf2Matrix::from_int(m);
}

IntMatrix lift_gf2_to_unimodular(const Gf2Matrix& a) {
  require(a.rows() == a.cols(), "matrix must be square");
  const std::size_t g = a.rows();
  // Reduce a to I by row operations E_k···E_1·a = I; over GF(2) each E is an
  // involution, so a = E_1···E_k, and the same word over Z gives the lift.
  std::vector<Bits> rows(g);
  for (std::size_t i = 0; i < g; ++i) rows[i] = a.row_bits(i);
  struct Op {
    bool swap;
    std::size_t r, s;  // swap r,s   or   row r += row s
  };
  std::vector<Op> ops;
  for (std::size_t col = 0; col < g; ++col) {
    std::size_t piv = col;
    while (piv < g && !((rows[piv] >> col) & 1u)) ++piv;
    require(piv < g, "GF(2) matrix is not invertible");
    if (piv != col) {
      std::swap(rows[piv], rows[col]);
      ops.push_back({true, piv, col});
    }
    for (std::size_t r = 0; r < g; ++r)
      if (r != col && ((rows[r] >> col) & 1u)) {
        rows[r] ^= rows[col];
        ops.push_back({false, r, col});
      }
  }
  IntMatrix lift = IntMatrix::identity(g);
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    // lift ← E·lift, building E_1···E_k from the right.
    if (it->swap) {
      for (std::size_t j = 0; j < g; ++j) std::swap(lift(it->r, j), lift(it->s, j));
    } else {
      for (std::size_t j = 0; j < g; ++j) lift(it->r, j) += lift(it->s, j);
    }
  }
  if (Gf2Matrix::from_int(lift) != a || !is_unimodular(lift)) fail(ErrorKind::Internal, "GF(2) lift failed");
  return lift;
}

IntMatrix sigma_M_matrix(const IntMatrix& m) {
  require(m.is_square() && m.rows() > 0 && m.is_symmetric(), "M must be square symmetric");
  require(m * m * m == m, "Σ_M requires M³ = M");
  const std::size_t g = m.rows();
  const IntMatrix id = IntMatrix::identity(g);
  IntMatrix s = block_matrix(-m, id, -(id + m * m), m);
  if (!is_symplectic(s) || s * s != -IntMatrix::identity(2 * g)) fail(ErrorKind::Internal, "Σ_M identities failed");
  return s;
}

SiegelPoint sigma_involution_image(const IntMatrix& m, const SpdMatrix& y) {
  require(m.is_square() && m.rows() == y.g() && m.is_symmetric(), "M must be symmetric g×g");
  require(m * m * m == m, "Σ_M requires M³ = M");
  const Mat mr = to_real(m);
  const auto g = static_cast<Eigen::Index>(y.g());
  const Mat d = Mat::Identity(g, g) - 0.5 * mr * mr;
  return SiegelPoint(0.5 * mr, SpdMatrix(symmetrize(d * y.inverse() * d)));
}

IntMatrix real_structure_matrix(const SiegelPoint& omega, double tol) {
  require(in_script_H(omega, tol), "point is not in script-H_g (2 Re Ω not integral)");
  const std::size_t g = omega.g();
  const auto twice = round_to_integer(2 * omega.X(), tol);
  if (!twice) fail(ErrorKind::InvalidInput, "2 Re Ω is not integral");
  const IntMatrix id = IntMatrix::identity(g);
  IntMatrix ms = block_matrix(-id, IntMatrix(g, g), *twice, id);
  const IntMatrix j = symplectic_J(g);
  if (ms.transpose() * j * ms != -j) fail(ErrorKind::Internal, "M_σ is not anti-symplectic");
  return ms;
}

ModuliClass moduli_class(const SiegelPoint& omega, double tol) {
  require(in_script_H(omega, tol), "point is not in script-H_g (2 Re Ω not integral)");
  const std::size_t g = omega.g();
  const IntMatrix twice = *round_to_integer(2 * omega.X(), tol);
  const Mod2StandardForm sf = mod2_standard_form(Gf2Matrix::from_int(twice));
  const IntMatrix lift = lift_gf2_to_unimodular(sf.A);
  const IntMatrix std_m = sf.S.to_int();
  // L·(2X)·ᵗL − S is even; T = ½(that) is integral and B = −T·ᵗL⁻¹.
  const IntMatrix diff = lift * twice * lift.transpose() - std_m;
  IntMatrix t(g, g);
  for (std::size_t i = 0; i < g; ++i)
    for (std::size_t j = 0; j < g; ++j) {
      if (diff(i, j) % 2 != 0) fail(ErrorKind::Internal, "mod-2 normalization is not even");
      t(i, j) = diff(i, j) / 2;
    }
  const IntMatrix linv_t = unimodular_inverse(lift).transpose();
  const IntMatrix gamma = block_matrix(lift, -(t * linv_t), IntMatrix(g, g), linv_t);
  if (!is_gamma_star(gamma)) fail(ErrorKind::Internal, "normalizer is not in Γ*_g");
  return {sf.invariant, std_m, minkowski_reduce(omega.Y()).R, gamma};
}

namespace {

// Candidate isometries between the reduced forms of y1 and y2, mapped back
// to A with A·Y1·ᵗA ≈ Y2.
struct ReducedPair {
  MinkowskiResult r1, r2;
  IsometrySearch search;
};

ReducedPair isometries_between(const SpdMatrix& y1, const SpdMatrix& y2, double tol, std::size_t max_maps) {
  ReducedPair p{minkowski_reduce(y1), minkowski_reduce(y2), {}};
  const double scale = std::max(1.0, std::max(max_abs(p.r1.R.matrix()), max_abs(p.r2.R.matrix())));
  p.search = find_isometries(p.r1.R.matrix(), p.r2.R.matrix(), tol * scale, max_maps);
  return p;
}

bool determinants_differ(const SpdMatrix& y1, const SpdMatrix& y2, double tol) {
  const double d1 = y1.det(), d2 = y2.det();
  return std::abs(d1 - d2) > std::max(tol, 1e-7 * std::max(std::abs(d1), std::abs(d2)));
}

}  // namespace

EquivalenceResult<IntMatrix> polarized_tori_equivalent(const SpdMatrix& y1, const SpdMatrix& y2, double tol) {
  require(y1.g() == y2.g(), "matrices must have the same size");
  if (y1.g() > kMaxReductionDim) fail(ErrorKind::Unsupported, "equivalence is supported for g ≤ 4");
  EquivalenceResult<IntMatrix> res;
  if (determinants_differ(y1, y2, tol)) {
    res.verdict = Verdict::Inequivalent;
    res.note = "determinants differ";
    return res;
  }
  const ReducedPair p = isometries_between(y1, y2, tol, 1);
  res.candidates_searched = p.search.candidates;
  const double scale = std::max(1.0, max_abs(y2.matrix()));
  for (const IntMatrix& b : p.search.maps) {
    const IntMatrix a = unimodular_inverse(p.r2.A) * b * p.r1.A;
    const Mat ar = to_real(a);
    if (max_abs(ar * y1.matrix() * ar.transpose() - y2.matrix()) <= tol * scale * std::max(1.0, max_abs(ar) * max_abs(ar))) {
      res.verdict = Verdict::Equivalent;
      res.witness = a;
      return res;
    }
  }
  if (!p.search.maps.empty() || !p.search.complete) {
    res.verdict = Verdict::Undecided;
    res.note = p.search.complete ? "isometry of reduced forms failed verification" : "isometry search cap reached";
    return res;
  }
  res.verdict = Verdict::Inequivalent;
  res.note = "no isometry between reduced forms";
  return res;
}

EquivalenceResult<IntMatrix> real_ppav_equivalent(const SiegelPoint& omega1, const SiegelPoint& omega2, double tol) {
  require(omega1.g() == omega2.g(), "points must have the same g");
  if (omega1.g() > 3) fail(ErrorKind::Unsupported, "real ppav equivalence is supported for g ≤ 3");
  const auto t1 = round_to_integer(2 * omega1.X(), tol), t2 = round_to_integer(2 * omega2.X(), tol);
  require(t1 && t2, "points must lie in script-H_g (2 Re Ω integral)");
  EquivalenceResult<IntMatrix> res;
  if (determinants_differ(omega1.Y(), omega2.Y(), tol) ||
      mod2_invariants(Gf2Matrix::from_int(*t1)) != mod2_invariants(Gf2Matrix::from_int(*t2))) {
    res.verdict = Verdict::Inequivalent;
    res.note = "determinant or mod-2 invariants differ";
    return res;
  }
  const ReducedPair p = isometries_between(omega1.Y(), omega2.Y(), tol, 4096);
  res.candidates_searched = p.search.candidates;
  const std::size_t g = omega1.g();
  const IntMatrix r2inv = unimodular_inverse(p.r2.A);
  for (const IntMatrix& b : p.search.maps) {
    const IntMatrix a = r2inv * b * p.r1.A;
    const IntMatrix diff = *t2 - a * *t1 * a.transpose();
    bool even = true;
    for (std::size_t i = 0; i < g && even; ++i)
      for (std::size_t j = 0; j < g && even; ++j) even = diff(i, j) % 2 == 0;
    if (!even) continue;
    IntMatrix s(g, g);
    for (std::size_t i = 0; i < g; ++i)
      for (std::size_t j = 0; j < g; ++j) s(i, j) = diff(i, j) / 2;
    const IntMatrix ainv_t = unimodular_inverse(a).transpose();
    const IntMatrix gamma = block_matrix(a, s * ainv_t, IntMatrix(g, g), ainv_t);
    if (!is_gamma_star(gamma)) continue;
    const SiegelPoint image = gamma_star_act(gamma, omega1, tol);
    const double scale = std::max(1.0, max_abs(omega2.omega()));
    if (max_abs(image.omega() - omega2.omega()) <= 100 * tol * scale) {
      res.verdict = Verdict::Equivalent;
      res.witness = gamma;
      return res;
    }
  }
  if (!p.search.complete) {
    res.verdict = Verdict::Undecided;
    res.note = "isometry search cap reached";
    return res;
  }
  res.verdict = Verdict::Inequivalent;
  res.note = p.search.maps.empty() ? "imaginary parts are not GL(g,Z)-equivalent"
                                   : "no isometry satisfies the mod-2 real-part condition";
  return res;
}

}  // namespace realtori
