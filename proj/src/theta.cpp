#include "realtori/theta.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "realtori/linalg.hpp"

namespace realtori {

namespace {

constexpr double kPi = std::numbers::pi;

bool unit(const Complex& z) { return std::abs(std::abs(z) - 1.0) <= 1e-12; }

long long mod2(long long v) { return ((v % 2) + 2) % 2; }

Vec to_vec(const IntVector& n) {
  Vec r(static_cast<Eigen::Index>(n.size()));
  for (std::size_t i = 0; i < n.size(); ++i) r(static_cast<Eigen::Index>(i)) = static_cast<double>(n[i]);
  return r;
}

void check_length(const IntVector& n, std::size_t len, const char* what) {
  require(n.size() == len, std::string(what) + " has the wrong length");
}

// Upper bound for Σ_{k>radius} #{‖m‖∞ = k} e^{−πμ(k−½)²} · e^{log_env}.
double gaussian_tail(std::size_t g, double mu, int radius, double log_env) {
  const double gd = static_cast<double>(g);
  // Beyond k_peak the shell-count growth no longer beats the Gaussian decay.
  const double k_peak = std::sqrt(gd / (kPi * mu)) + 1;
  double total = 0;
  for (int k = radius + 1; k < radius + 1'000'000; ++k) {
    const double shell = std::pow(2.0 * k + 1, gd) - std::pow(2.0 * k - 1, gd);
    const double term = std::exp(std::log(shell) - kPi * mu * (k - 0.5) * (k - 0.5) + log_env);
    total += term;
    if (k >= k_peak && term <= 1e-18 * total) break;
  }
  return total;
}

// Visits m ∈ Z^g shell by shell (‖m‖∞ = 0, 1, …, radius), lexicographically within a shell.
template <class F>
void for_each_shell_point(std::size_t g, int radius, F&& visit) {
  IntVector m(g);
  for (long long k = 0; k <= radius; ++k) {
    std::fill(m.begin(), m.end(), -k);
    for (;;) {
      long long norm = 0;
      for (long long x : m) norm = std::max(norm, std::llabs(x));
      if (norm == k) visit(m);
      bool done = true;
      for (std::size_t pos = g; pos-- > 0;) {
        if (m[pos] < k) {
          ++m[pos];
          for (std::size_t q = pos + 1; q < g; ++q) m[q] = -k;
          done = false;
          break;
        }
      }
      if (done) break;
    }
  }
}

struct Radius {
  int radius;
  double tail;
};

Radius choose_radius(std::size_t g, double mu, double log_env, double target) {
  for (int r = 0; r <= kThetaMaxRadius; ++r) {
    const double t = gaussian_tail(g, mu, r, log_env);
    if (t <= target) return {r, t};
  }
  fail(ErrorKind::Numerical, "requested eps is unreachable within the truncation radius cap");
}

// Centred direct summation of θ at v; the tail target is eps·e^{log_env} when
// `relative`, else eps.
LatticeSum theta_direct(const ThetaSpec& s, const Vec& v, double eps, bool relative) {
  const std::size_t g = s.g();
  const Mat gram = symmetrize(Mat(s.Pi.transpose() * s.B * s.Pi));
  const double mu = smallest_eigenvalue(gram);
  const Vec c = s.Pi.fullPivLu().solve(v);
  IntVector n0(g);
  Vec delta(static_cast<Eigen::Index>(g));
  for (std::size_t i = 0; i < g; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    n0[i] = static_cast<long long>(std::nearbyint(-c(ii)));
    delta(ii) = static_cast<double>(n0[i]) + c(ii);
  }
  const double log_env = kPi * c.dot(gram * c);
  if (log_env > 650) fail(ErrorKind::Numerical, "theta value overflows double precision at this v");
  const Radius r = choose_radius(g, mu, log_env, relative ? eps * std::exp(log_env) : eps);
  Complex sum = 0;
  IntVector n(g);
  for_each_shell_point(g, r.radius, [&](const IntVector& m) {
    const Vec x = to_vec(m) + delta;
    for (std::size_t i = 0; i < g; ++i) n[i] = n0[i] + m[i];
    sum += std::conj(s.character(n)) * std::exp(-kPi * x.dot(gram * x) + log_env);
  });
  return {sum, r.tail, r.radius, eps};
}

}  // namespace

SemiCharacter::SemiCharacter(std::vector<Complex> basis_values, const Mat& e) : values_(std::move(basis_values)), e_(e) {
  const auto n = static_cast<Eigen::Index>(values_.size());
  require(e.rows() == n && e.cols() == n, "E must be n×n for n basis values");
  for (const Complex& z : values_) require(unit(z), "semi-character values must have modulus 1");
  require(max_abs(e + e.transpose()) <= 1e-9, "E must be alternating");
  e_int_.assign(values_.size(), std::vector<long long>(values_.size()));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double r = std::nearbyint(e(i, j));
      require(std::abs(e(i, j) - r) <= 1e-9, "E must be integral on the lattice");
      e_int_[i][j] = static_cast<long long>(r);
    }
}

Complex SemiCharacter::operator()(const IntVector& n) const {
  check_length(n, values_.size(), "lattice coordinate vector");
  double phase = 0;
  long long parity = 0;
  for (std::size_t k = 0; k < n.size(); ++k) {
    phase += static_cast<double>(n[k]) * std::arg(values_[k]);
    for (std::size_t j = 0; j < k; ++j) parity += mod2(n[j]) * mod2(n[k]) * mod2(e_int_[j][k]);
  }
  const Complex base = std::polar(1.0, std::remainder(phase, 2 * kPi));
  return parity % 2 ? -base : base;
}

Complex canonical_semicharacter(const SpdMatrix& y, const IntVector& kappa, const IntVector& lambda_int) {
  check_length(kappa, y.g(), "κ");
  check_length(lambda_int, y.g(), "λ");
  const Vec lam = y.matrix() * to_vec(lambda_int);
  const double s = to_vec(kappa).dot(y.inverse() * lam);
  const double r = std::nearbyint(s);
  if (std::abs(s - r) <= 1e-9) return std::fmod(std::abs(r), 2.0) == 0 ? Complex(1, 0) : Complex(-1, 0);
  return std::polar(1.0, -kPi * s);
}

double semicharacter_check(const LatticeFunction& alpha, const Mat& e, int trials, unsigned long long seed) {
  require(e.rows() == e.cols(), "E must be square");
  const std::size_t n = static_cast<std::size_t>(e.rows());
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<long long> dist(-3, 3);
  double worst = 0;
  IntVector a(n), b(n), ab(n);
  for (int t = 0; t < trials; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = dist(gen);
      b[i] = dist(gen);
      ab[i] = a[i] + b[i];
    }
    const double pairing = to_vec(a).dot(e * to_vec(b));
    const Complex expect = alpha(a) * alpha(b) * std::polar(1.0, kPi * pairing);
    worst = std::max(worst, std::abs(alpha(ab) - expect));
  }
  return worst;
}

double semicharacter_check(const SemiCharacter& alpha, int trials, unsigned long long seed) {
  return semicharacter_check([&](const IntVector& n) { return alpha(n); }, alpha.E(), trials, seed);
}

void ThetaSpec::validate() const {
  require(Pi.rows() == Pi.cols() && Pi.rows() > 0, "Pi must be square");
  require(Eigen::FullPivLU<Mat>(Pi).isInvertible(), "Pi must be invertible");
  require(B.rows() == Pi.rows() && B.cols() == Pi.cols(), "B must be g×g");
  require(max_abs(B - B.transpose()) <= 1e-10 * std::max(1.0, max_abs(B)), "B must be symmetric");
  require(cholesky_ok(symmetrize(B)), "B must be positive definite");
  require(rho.size() == g(), "ρ needs one value per basis vector");
  for (const Complex& z : rho) require(unit(z), "ρ values must have modulus 1");
}

Complex ThetaSpec::character(const IntVector& n) const {
  check_length(n, rho.size(), "lattice coordinate vector");
  double phase = 0;
  for (std::size_t k = 0; k < n.size(); ++k) phase += static_cast<double>(n[k]) * std::arg(rho[k]);
  return std::polar(1.0, std::remainder(phase, 2 * kPi));
}

LineBundleSpec canonical_line_bundle_data(const SpdMatrix& y) {
  const auto g = static_cast<Eigen::Index>(y.g());
  LineBundleSpec s;
  s.Pi = y.matrix();
  s.H = y.inverse().cast<Complex>();
  // Complex lattice basis e_1..e_g, iYe_1..iYe_g and E = Im H on it.
  CMat basis(g, 2 * g);
  basis.leftCols(g) = CMat::Identity(g, g);
  basis.rightCols(g) = Complex(0, 1) * s.Pi.cast<Complex>();
  const Mat e = (basis.transpose() * s.H * basis.conjugate()).imag();
  // α_Y(κ + iλ) = e^{πi E(κ, iλ)} is 1 on every basis vector.
  s.alpha = SemiCharacter(std::vector<Complex>(static_cast<std::size_t>(2 * g), Complex(1, 0)), e.array().round().matrix());
  return s;
}

ThetaSpec section_theta_spec(const LineBundleSpec& bundle) {
  const std::size_t g = bundle.g();
  ThetaSpec t{bundle.Pi, symmetrize(Mat(bundle.H.real())), {}};
  for (std::size_t k = 0; k < g; ++k) {
    IntVector n(2 * g, 0);
    n[g + k] = 2;
    t.rho.push_back(bundle.alpha(n));
  }
  t.validate();
  return t;
}

FactorKind parse_factor_kind(const std::string& name) {
  if (name == "J_Halpha" || name == "J_H_alpha") return FactorKind::J_H_alpha;
  if (name == "I_Brho" || name == "I_B_rho") return FactorKind::I_B_rho;
  if (name == "I_alphaLambda" || name == "I_alpha_Lambda") return FactorKind::I_alpha_Lambda;
  if (name == "I_BLambdaalphaLambda" || name == "I_B_Lambda_alpha_Lambda") return FactorKind::I_B_Lambda_alpha_Lambda;
  fail(ErrorKind::InvalidInput, "unknown automorphic factor kind: " + name);
}

const char* factor_kind_name(FactorKind kind) {
  switch (kind) {
    case FactorKind::J_H_alpha: return "J_Halpha";
    case FactorKind::I_B_rho: return "I_Brho";
    case FactorKind::I_alpha_Lambda: return "I_alphaLambda";
    case FactorKind::I_B_Lambda_alpha_Lambda: return "I_BLambdaalphaLambda";
  }
  return "";
}

namespace {

Complex herm(const CMat& h, const CVec& x, const CVec& y) { return (x.transpose() * h * y.conjugate())(0, 0); }

IntVector imaginary_coords(const IntVector& lambda_int, long long scale) {
  IntVector n(2 * lambda_int.size(), 0);
  for (std::size_t k = 0; k < lambda_int.size(); ++k) n[lambda_int.size() + k] = scale * lambda_int[k];
  return n;
}

}  // namespace

Complex factor_J(const LineBundleSpec& s, const IntVector& ell, const CVec& z) {
  const auto g = static_cast<Eigen::Index>(s.g());
  check_length(ell, 2 * s.g(), "ℓ");
  require(z.size() == g, "z must have length g");
  const Vec n = to_vec(ell);
  const CVec l = n.head(g).cast<Complex>() + Complex(0, 1) * (s.Pi * n.tail(g)).cast<Complex>();
  return s.alpha(ell) * std::exp(0.5 * kPi * herm(s.H, l, l) + kPi * herm(s.H, z, l));
}

Complex factor_I_B_rho(const ThetaSpec& s, const IntVector& lambda_int, const Vec& v) {
  check_length(lambda_int, s.g(), "λ");
  require(static_cast<std::size_t>(v.size()) == s.g(), "v must have length g");
  const Vec lam = s.Pi * to_vec(lambda_int);
  return s.character(lambda_int) * std::exp(kPi * lam.dot(s.B * lam) + 2 * kPi * v.dot(s.B * lam));
}

Complex factor_I_alpha(const LineBundleSpec& s, const IntVector& lambda_int, const Vec& v) {
  check_length(lambda_int, s.g(), "λ");
  require(static_cast<std::size_t>(v.size()) == s.g(), "v must have length g");
  const CVec lam = (s.Pi * to_vec(lambda_int)).cast<Complex>();
  const CVec vc = v.cast<Complex>();
  return s.alpha(imaginary_coords(lambda_int, 1)) * std::exp(0.5 * kPi * herm(s.H, lam, lam) + kPi * herm(s.H, vc, lam));
}

Complex factor_I_B_alpha(const LineBundleSpec& s, const IntVector& lambda_int, const Vec& v) {
  check_length(lambda_int, s.g(), "λ");
  require(static_cast<std::size_t>(v.size()) == s.g(), "v must have length g");
  const Mat b = symmetrize(Mat(s.H.real()));
  const Vec lam = s.Pi * to_vec(lambda_int);
  return s.alpha(imaginary_coords(lambda_int, 2)) * std::exp(kPi * lam.dot(b * lam) + 2 * kPi * v.dot(b * lam));
}

LatticeSum theta_eval(const ThetaSpec& s, const Vec& v, double eps, bool reduce_cell) {
  s.validate();
  require(static_cast<std::size_t>(v.size()) == s.g(), "v must have length g");
  require(eps > 0, "eps must be positive");
  if (!reduce_cell) return theta_direct(s, v, eps, true);
  const Vec c = s.Pi.fullPivLu().solve(v);
  IntVector shift(s.g());
  for (std::size_t i = 0; i < s.g(); ++i) shift[i] = static_cast<long long>(std::nearbyint(c(static_cast<Eigen::Index>(i))));
  const Vec v0 = v - s.Pi * to_vec(shift);
  LatticeSum cell = theta_direct(s, v0, eps, false);
  const Complex factor = factor_I_B_rho(s, shift, v0);
  cell.value *= factor;
  cell.tail_bound *= std::abs(factor);
  return cell;
}

double theta_transform_residual(const ThetaSpec& s, const IntVector& lambda_int, const Vec& v) {
  s.validate();
  check_length(lambda_int, s.g(), "λ");
  const Vec shifted = v + s.Pi * to_vec(lambda_int);
  const Complex lhs = theta_eval(s, shifted, 1e-13, false).value;
  const Complex rhs = factor_I_B_rho(s, lambda_int, v) * theta_eval(s, v, 1e-13, false).value;
  return std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
}

LatticeSum periodic_function_eval(const ThetaSpec& s, const Vec& v, double eps) {
  s.validate();
  require(static_cast<std::size_t>(v.size()) == s.g(), "v must have length g");
  require(eps > 0, "eps must be positive");
  const std::size_t g = s.g();
  const Mat gram = symmetrize(Mat(s.Pi.transpose() * s.B * s.Pi));
  require(max_abs(gram - gram.array().round().matrix()) <= 1e-9, "B must be integral on Λ×Λ");
  const double mu = smallest_eigenvalue(gram);
  const Radius r = choose_radius(g, mu, 0.0, eps);
  const Vec w = s.Pi.transpose() * s.B * v;
  Complex sum = 0;
  for_each_shell_point(g, r.radius, [&](const IntVector& m) {
    const Vec x = to_vec(m);
    sum += s.character(m) * std::exp(Complex(-kPi * x.dot(gram * x), 2 * kPi * w.dot(x)));
  });
  return {sum, r.tail, r.radius, eps};
}

}  // namespace realtori
