#include <doctest.h>

#include <cmath>

#include "realtori/linalg.hpp"
#include "realtori/siegel.hpp"
#include "test_support.hpp"

using namespace realtori;
using testsupport::max_abs;

namespace {

const Complex I1(0, 1);

SiegelPoint random_point(int g) {
  return SiegelPoint(testsupport::random_symmetric(g, -2, 2), testsupport::random_spd(g, 0.3));
}

// Real symplectic word in the generators (I,B;0,I), diag(A,ᵗA⁻¹), J.
Mat random_real_symplectic(int g, int length) {
  Mat m = Mat::Identity(2 * g, 2 * g);
  for (int s = 0; s < length; ++s) {
    Mat gen = Mat::Identity(2 * g, 2 * g);
    switch (testsupport::uniform_int(0, 2)) {
      case 0: gen.topRightCorner(g, g) = testsupport::random_symmetric(g); break;
      case 1: {
        Mat a = testsupport::random_matrix(g, g) + 2 * Mat::Identity(g, g);
        gen.topLeftCorner(g, g) = a;
        gen.bottomRightCorner(g, g) = a.inverse().transpose();
        break;
      }
      default: gen = symplectic_J_real(g);
    }
    m = m * gen;
  }
  return m;
}

double dist(const SiegelPoint& a, const SiegelPoint& b) { return max_abs(a.omega() - b.omega()); }

}  // namespace

TEST_CASE("SiegelPoint and DiskPoint validation") {
  CHECK_THROWS_AS(SiegelPoint(Mat{{0, 1}, {0, 0}}, Mat::Identity(2, 2)), Error);
  CHECK_THROWS_AS(SiegelPoint(Mat::Zero(1, 1), Mat{{-1}}), Error);
  CHECK_THROWS_AS(DiskPoint(CMat::Identity(2, 2)), Error);
  CHECK_NOTHROW(DiskPoint(CMat::Zero(2, 2)));
}

TEST_CASE("sp_act fixed examples") {
  for (int g = 1; g <= 3; ++g) {
    SiegelPoint w = random_point(g);
    CHECK(dist(sp_act(Mat::Identity(2 * g, 2 * g), w), w) < 1e-14);
    SiegelPoint ii = SiegelPoint::imaginary(SpdMatrix::identity(g));
    CHECK(dist(sp_act(symplectic_J_real(g), ii), ii) < 1e-14);
    Mat b = testsupport::random_symmetric(g);
    Mat t = Mat::Identity(2 * g, 2 * g);
    t.topRightCorner(g, g) = b;
    CHECK(max_abs(sp_act(t, w).omega() - (w.omega() + b.cast<Complex>())) < 1e-13);
  }
  Mat bad = Mat::Identity(2, 2);
  bad(0, 0) = 2;
  CHECK_THROWS_AS(sp_act(bad, random_point(1)), Error);
}

TEST_CASE("sp_act cocycle and tau-equivariance on random words") {
  for (int trial = 0; trial < 60; ++trial) {
    const int g = 1 + trial % 3;
    Mat m1 = random_real_symplectic(g, 1 + trial % 6), m2 = random_real_symplectic(g, 1 + (trial + 3) % 6);
    SiegelPoint w = random_point(g);
    const SiegelPoint lhs = sp_act(Mat(m1 * m2), w), rhs = sp_act(m1, sp_act(m2, w));
    CHECK(dist(lhs, rhs) <= 1e-10 * std::max(1.0, max_abs(lhs.omega())));
    const SiegelPoint e1 = tau_point(sp_act(m1, w)), e2 = sp_act(tau_group(m1), tau_point(w));
    CHECK(dist(e1, e2) <= 1e-10 * std::max(1.0, max_abs(e1.omega())));
  }
}

TEST_CASE("tau on points and group elements") {
  SiegelPoint iy = SiegelPoint::imaginary(SpdMatrix(testsupport::random_spd(2)));
  CHECK(dist(tau_point(iy), iy) == 0);
  SiegelPoint w = random_point(2);
  CHECK(tau_point(w).X() == -w.X());
  CHECK(dist(tau_point(tau_point(w)), w) == 0);
  CHECK(tau_group(symplectic_J(2)) == -symplectic_J(2));
  IntMatrix a{{2, 1}, {1, 1}};
  IntMatrix emb = block_matrix(a, IntMatrix(2, 2), IntMatrix(2, 2), unimodular_inverse(a).transpose());
  CHECK(tau_group(emb) == emb);
  IntMatrix x = testsupport::random_symplectic_word(2, 5);
  CHECK(tau_group(tau_group(x)) == x);
}

TEST_CASE("Cayley transforms") {
  SiegelPoint ii = SiegelPoint::imaginary(SpdMatrix::identity(2));
  CHECK(max_abs(cayley_to_disk(ii).W()) < 1e-15);
  SiegelPoint two_i = SiegelPoint::imaginary(SpdMatrix(Mat{{2}}));
  CHECK(std::abs(cayley_to_disk(two_i).W()(0, 0) - Complex(1.0 / 3)) < 1e-15);
  CHECK(dist(cayley_to_halfspace(DiskPoint(CMat::Zero(3, 3))), SiegelPoint::imaginary(SpdMatrix::identity(3))) < 1e-15);
  CHECK(std::abs(cayley_to_halfspace(DiskPoint(CMat::Constant(1, 1, 1.0 / 3))).omega()(0, 0) - 2.0 * I1) < 1e-15);
  for (int trial = 0; trial < 100; ++trial) {
    const int g = 1 + trial % 3;
    SiegelPoint w = random_point(g);
    CHECK(dist(cayley_to_halfspace(cayley_to_disk(w)), w) <= 1e-12 * std::max(1.0, max_abs(w.omega())));
    DiskPoint d = cayley_to_disk(random_point(g));
    CHECK(max_abs(cayley_to_disk(cayley_to_halfspace(d)).W() - d.W()) <= 1e-12);
  }
}

TEST_CASE("disk_act agrees with the conjugated half-space action") {
  DiskPoint d = cayley_to_disk(random_point(2));
  CHECK(max_abs(disk_act(Mat::Identity(4, 4), d).W() - d.W()) < 1e-15);
  // (A, B; −B, A) with A + iB unitary fixes the origin of the disk.
  const double t = 0.7;
  Mat k(2, 2);
  k << std::cos(t), std::sin(t), -std::sin(t), std::cos(t);
  CHECK(max_abs(disk_act(k, DiskPoint(CMat::Zero(1, 1))).W()) < 1e-15);
  for (int trial = 0; trial < 60; ++trial) {
    const int g = 1 + trial % 3;
    Mat m = random_real_symplectic(g, 1 + trial % 5);
    SiegelPoint w = random_point(g);
    CHECK(max_abs(disk_act(m, cayley_to_disk(w)).W() - cayley_to_disk(sp_act(m, w)).W()) < 1e-10);
  }
}

TEST_CASE("script-H membership and Gamma-star action") {
  CHECK(in_script_H(SiegelPoint::imaginary(SpdMatrix::identity(2))));
  Mat half = 0.5 * Mat{{1, 3}, {3, -2}};
  CHECK(in_script_H(SiegelPoint(half, Mat::Identity(2, 2))));
  CHECK_FALSE(in_script_H(SiegelPoint(Mat{{0.3}}, Mat{{1}})));

  SiegelPoint w(half, testsupport::random_spd(2));
  CHECK(dist(gamma_star_act(IntMatrix::identity(4), w), w) < 1e-15);
  IntMatrix b{{1, 2}, {2, 0}};
  IntMatrix t = block_matrix(IntMatrix::identity(2), b, IntMatrix(2, 2), IntMatrix::identity(2));
  CHECK(max_abs(gamma_star_act(t, w).omega() - (w.omega() + to_real(b).cast<Complex>())) < 1e-14);
  CHECK_THROWS_AS(gamma_star_act(symplectic_J(2), w), Error);
  CHECK_THROWS_AS(gamma_star_act(t, SiegelPoint(Mat{{0.3, 0}, {0, 0}}, Mat::Identity(2, 2))), Error);

  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t g = 1 + trial % 3;
    const auto gi = static_cast<int>(g);
    IntMatrix a = testsupport::random_unimodular(g, 2);
    IntMatrix sym = testsupport::random_int_matrix(g, g, 2);
    sym = sym + sym.transpose();
    // B = S·ᵗA⁻¹ makes A·ᵗB = S symmetric.
    const IntMatrix ainv_t = unimodular_inverse(a).transpose();
    IntMatrix gamma = block_matrix(a, sym * ainv_t, IntMatrix(g, g), ainv_t);
    REQUIRE(is_gamma_star(gamma));
    REQUIRE(is_symplectic(gamma));
    IntMatrix twice_x = testsupport::random_int_matrix(g, g, 3);
    twice_x = twice_x + twice_x.transpose();
    SiegelPoint p(0.5 * to_real(twice_x), testsupport::random_spd(gi));
    const SiegelPoint viaStar = gamma_star_act(gamma, p);
    CHECK(dist(viaStar, sp_act(gamma, p)) < 1e-10 * std::max(1.0, max_abs(viaStar.omega())));
    CHECK(in_script_H(viaStar));
    IntMatrix other = block_matrix(IntMatrix::identity(g), sym, IntMatrix(g, g), IntMatrix::identity(g));
    CHECK(is_gamma_star(gamma * other));
  }
}

TEST_CASE("Jacobi group action") {
  const int g = 2, h = 2;
  SiegelPoint w = random_point(g);
  CMat z = testsupport::random_matrix(h, g).cast<Complex>() + I1 * testsupport::random_matrix(h, g).cast<Complex>();
  auto [w1, z1] = jacobi_group_act(JacobiGroupElement::identity(g, h), w, z);
  CHECK(dist(w1, w) < 1e-15);
  CHECK(max_abs(z1 - z) < 1e-15);

  JacobiGroupElement heis = JacobiGroupElement::identity(g, h);
  heis.lambda = testsupport::random_matrix(h, g);
  heis.mu = testsupport::random_matrix(h, g);
  heis.kappa = -heis.mu * heis.lambda.transpose();  // κ + μᵗλ = 0
  auto [w2, z2] = jacobi_group_act(heis, w, z);
  CHECK(dist(w2, w) < 1e-15);
  CHECK(max_abs(z2 - (z + heis.lambda.cast<Complex>() * w.omega() + heis.mu.cast<Complex>())) < 1e-14);

  JacobiGroupElement bad = heis;
  bad.kappa = Mat{{0, 1}, {0, 0}};
  bad.mu.setZero();
  CHECK_THROWS_AS(bad.validate(), Error);

  for (int trial = 0; trial < 30; ++trial) {
    auto make = [&]() {
      JacobiGroupElement e = JacobiGroupElement::identity(g, h);
      e.M = random_real_symplectic(g, 3);
      e.lambda = testsupport::random_matrix(h, g);
      e.mu = testsupport::random_matrix(h, g);
      e.kappa = testsupport::random_symmetric(h) - e.mu * e.lambda.transpose();
      return e;
    };
    JacobiGroupElement a = make(), b = make();
    const JacobiGroupElement ab = jacobi_group_compose(a, b);
    CHECK_NOTHROW(ab.validate(1e-9));
    auto [wb, zb] = jacobi_group_act(b, w, z);
    auto [wab, zab] = jacobi_group_act(a, wb, zb);
    auto [wc, zc] = jacobi_group_act(ab, w, z);
    CHECK(dist(wab, wc) < 1e-10 * std::max(1.0, max_abs(wc.omega())));
    CHECK(max_abs(zab - zc) < 1e-10 * std::max(1.0, max_abs(zc)));
  }
}

TEST_CASE("Siegel fundamental set") {
  CHECK(in_siegel_fundamental_set(SiegelPoint::imaginary(SpdMatrix(2 * Mat::Identity(3, 3))), 3));
  CHECK_FALSE(in_siegel_fundamental_set(SiegelPoint(Mat{{10}}, Mat{{1}}), 3));
  CHECK_FALSE(in_siegel_fundamental_set(SiegelPoint::imaginary(SpdMatrix(Mat{{9, 0}, {0, 1}})), 3));
  // d_1 too small: 1 < u·d_1 fails.
  CHECK_FALSE(in_siegel_fundamental_set(SiegelPoint::imaginary(SpdMatrix(Mat{{0.2}})), 3));
  // Off-diagonal Jacobi coordinate w_12 = 4 ≥ u.
  CHECK_FALSE(in_siegel_fundamental_set(SiegelPoint::imaginary(SpdMatrix(Mat{{1, 4}, {4, 17}})), 3));
  CHECK_THROWS_AS(in_siegel_fundamental_set(SiegelPoint::imaginary(SpdMatrix::identity(1)), 1), Error);
}

TEST_CASE("real_locus_embed") {
  auto [p, z] = real_locus_embed(SpdMatrix::identity(2));
  CHECK(dist(p, SiegelPoint::imaginary(SpdMatrix::identity(2))) == 0);
  CHECK(z.rows() == 0);
  Mat v = testsupport::random_matrix(3, 2);
  SpdMatrix y(testsupport::random_spd(2));
  auto [p2, z2] = real_locus_embed(y, v);
  CHECK(p2.Y().matrix() == y.matrix());
  CHECK(max_abs(z2.imag()) == 0);
  CHECK(max_abs(z2.real() - v) == 0);
  CHECK(dist(tau_point(p2), p2) == 0);
}
