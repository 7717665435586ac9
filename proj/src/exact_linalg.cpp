#include "realtori/exact_linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace realtori {

namespace {

void require_square(const IntMatrix& m, const char* what) {
  require(m.is_square(), std::string(what) + ": matrix must be square");
}

BigInt abs_big(const BigInt& v) { return v < 0 ? BigInt(-v) : v; }

}  // namespace

// ---------------------------------------------------------------- Gf2Matrix

Gf2Matrix::Gf2Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), row_(rows, 0) {
  require(cols <= 64, "GF(2) matrices are limited to 64 columns");
}

Gf2Matrix Gf2Matrix::identity(std::size_t n) {
  Gf2Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
  m.symmetric_ = true;
  return m;
}

Gf2Matrix Gf2Matrix::symmetric(const std::vector<std::vector<int>>& bits) {
  const std::size_t n = bits.size();
  Gf2Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    require(bits[i].size() == n, "GF(2) matrix must be square");
    for (std::size_t j = 0; j < n; ++j) {
      int b = bits[i][j];
      require(b == 0 || b == 1, "GF(2) entries must be 0 or 1");
      m.set(i, j, b == 1);
    }
  }
  require(m.is_symmetric(), "GF(2) matrix is not symmetric");
  m.symmetric_ = true;
  return m;
}

Gf2Matrix Gf2Matrix::from_int(const IntMatrix& a) {
  Gf2Matrix m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m.set(i, j, (a(i, j) & 1) != 0);
  m.symmetric_ = m.is_symmetric();
  return m;
}

void Gf2Matrix::set(std::size_t i, std::size_t j, bool v) {
  if (v)
    row_[i] |= (1ull << j);
  else
    row_[i] &= ~(1ull << j);
}

bool Gf2Matrix::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      if (get(i, j) != get(j, i)) return false;
  return true;
}

Gf2Matrix Gf2Matrix::transpose() const {
  Gf2Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (get(i, j)) t.set(j, i, true);
  t.symmetric_ = symmetric_;
  return t;
}

Gf2Matrix Gf2Matrix::operator*(const Gf2Matrix& o) const {
  require(cols_ == o.rows_, "GF(2) product shape mismatch");
  Gf2Matrix p(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    std::uint64_t acc = 0;
    for (std::size_t k = 0; k < cols_; ++k)
      if (get(i, k)) acc ^= o.row_[k];
    p.row_[i] = acc;
  }
  p.symmetric_ = p.is_symmetric();
  return p;
}

IntMatrix Gf2Matrix::to_int() const {
  IntMatrix m(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(i, j) = get(i, j) ? 1 : 0;
  return m;
}

std::size_t gf2_rank(const Gf2Matrix& n) {
  std::vector<std::uint64_t> rows(n.rows());
  for (std::size_t i = 0; i < n.rows(); ++i) rows[i] = n.row_bits(i);
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n.cols() && rank < rows.size(); ++col) {
    const std::uint64_t bit = 1ull << col;
    std::size_t piv = rank;
    while (piv < rows.size() && !(rows[piv] & bit)) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (i != rank && (rows[i] & bit)) rows[i] ^= rows[rank];
    ++rank;
  }
  return rank;
}

std::optional<Gf2Matrix> gf2_inverse(const Gf2Matrix& m) {
  require(m.rows() == m.cols(), "GF(2) inverse needs a square matrix");
  const std::size_t n = m.rows();
  std::vector<std::uint64_t> a(n), inv(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = m.row_bits(i);
    inv[i] = 1ull << i;
  }
  for (std::size_t col = 0; col < n; ++col) {
    const std::uint64_t bit = 1ull << col;
    std::size_t piv = col;
    while (piv < n && !(a[piv] & bit)) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    for (std::size_t i = 0; i < n; ++i)
      if (i != col && (a[i] & bit)) {
        a[i] ^= a[col];
        inv[i] ^= inv[col];
      }
  }
  Gf2Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out.set_row_bits(i, inv[i]);
  return out;
}

// ------------------------------------------------------------- determinants

BigInt det_int(const IntMatrix& m) {
  require_square(m, "det_int");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  std::vector<std::vector<BigInt>> a(n, std::vector<BigInt>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = m(i, j);
  int sign = 1;
  BigInt prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[p], a[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

BigRational det_rat(const RatMatrix& m) {
  require(m.is_square(), "det_rat: matrix must be square");
  const std::size_t n = m.rows();
  RatMatrix a(m);
  BigRational det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, k) == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(k, j));
      det = -det;
    }
    det *= a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k) == 0) continue;
      BigRational f = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

bool is_unimodular(const IntMatrix& m) {
  require_square(m, "is_unimodular");
  return abs_big(det_int(m)) == 1;
}

RatMatrix to_rational(const IntMatrix& m) {
  RatMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = BigRational(m(i, j));
  return r;
}

std::optional<IntMatrix> to_integer(const RatMatrix& m) {
  IntMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (denominator(m(i, j)) != 1) return std::nullopt;
      r(i, j) = numerator(m(i, j));
    }
  return r;
}

RatMatrix rational_inverse(const RatMatrix& m) {
  require(m.is_square(), "inverse: matrix must be square");
  const std::size_t n = m.rows();
  RatMatrix a(m), inv = RatMatrix::identity(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, k) == 0) ++p;
    if (p == n) fail(ErrorKind::InvalidInput, "inverse: matrix is singular");
    if (p != k)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(p, j), a(k, j));
        std::swap(inv(p, j), inv(k, j));
      }
    BigRational piv = a(k, k);
    for (std::size_t j = 0; j < n; ++j) {
      a(k, j) /= piv;
      inv(k, j) /= piv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || a(i, k) == 0) continue;
      BigRational f = a(i, k);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= f * a(k, j);
        inv(i, j) -= f * inv(k, j);
      }
    }
  }
  return inv;
}

IntMatrix unimodular_inverse(const IntMatrix& m) {
  require(is_unimodular(m), "matrix is not unimodular");
  auto inv = to_integer(rational_inverse(to_rational(m)));
  if (!inv) fail(ErrorKind::Internal, "inverse of a unimodular matrix is not integral");
  return *inv;
}

// ---------------------------------------------------------------- symplectic

IntMatrix symplectic_J(std::size_t g) {
  IntMatrix j(2 * g, 2 * g);
  for (std::size_t i = 0; i < g; ++i) {
    j(i, g + i) = 1;
    j(g + i, i) = -1;
  }
  return j;
}

Mat symplectic_J_real(std::size_t g) {
  Mat j = Mat::Zero(2 * g, 2 * g);
  for (std::size_t i = 0; i < g; ++i) {
    j(i, g + i) = 1;
    j(g + i, i) = -1;
  }
  return j;
}

bool is_symplectic(const IntMatrix& m) {
  require(m.is_square() && m.rows() % 2 == 0, "is_symplectic: dimension must be even");
  const IntMatrix j = symplectic_J(m.rows() / 2);
  return m.transpose() * j * m == j;
}

bool is_symplectic(const Mat& m, double tol) {
  require(m.rows() == m.cols() && m.rows() % 2 == 0, "is_symplectic: dimension must be even");
  const Mat j = symplectic_J_real(m.rows() / 2);
  return (m.transpose() * j * m - j).cwiseAbs().maxCoeff() <= tol;
}

IntMatrix block_matrix(const IntMatrix& a, const IntMatrix& b, const IntMatrix& c, const IntMatrix& d) {
  require(a.rows() == b.rows() && c.rows() == d.rows() && a.cols() == c.cols() && b.cols() == d.cols(),
          "block_matrix: incompatible blocks");
  IntMatrix m(a.rows() + c.rows(), a.cols() + b.cols());
  m.set_block(0, 0, a);
  m.set_block(0, a.cols(), b);
  m.set_block(a.rows(), 0, c);
  m.set_block(a.rows(), a.cols(), d);
  return m;
}

IntMatrix symplectic_inverse(const IntMatrix& m) {
  require(is_symplectic(m), "symplectic_inverse: matrix is not symplectic");
  const std::size_t g = m.rows() / 2;
  const IntMatrix a = m.block(0, 0, g, g), b = m.block(0, g, g, g);
  const IntMatrix c = m.block(g, 0, g, g), d = m.block(g, g, g, g);
  return block_matrix(d.transpose(), -b.transpose(), -c.transpose(), a.transpose());
}

Mat symplectic_inverse(const Mat& m, double tol) {
  require(is_symplectic(m, tol), "symplectic_inverse: matrix is not symplectic");
  const Eigen::Index g = m.rows() / 2;
  Mat inv(2 * g, 2 * g);
  inv.topLeftCorner(g, g) = m.bottomRightCorner(g, g).transpose();
  inv.topRightCorner(g, g) = -m.topRightCorner(g, g).transpose();
  inv.bottomLeftCorner(g, g) = -m.bottomLeftCorner(g, g).transpose();
  inv.bottomRightCorner(g, g) = m.topLeftCorner(g, g).transpose();
  return inv;
}

// ------------------------------------------------------------ Smith form

namespace {

struct SnfWork {
  IntMatrix a, u, v;

  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < a.cols(); ++c) std::swap(a(i, c), a(j, c));
    for (std::size_t c = 0; c < u.cols(); ++c) std::swap(u(i, c), u(j, c));
  }
  void swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t r = 0; r < a.rows(); ++r) std::swap(a(r, i), a(r, j));
    for (std::size_t r = 0; r < v.rows(); ++r) std::swap(v(r, i), v(r, j));
  }
  // row_i += q * row_j
  void add_row(std::size_t i, std::size_t j, const BigInt& q) {
    for (std::size_t c = 0; c < a.cols(); ++c) a(i, c) += q * a(j, c);
    for (std::size_t c = 0; c < u.cols(); ++c) u(i, c) += q * u(j, c);
  }
  void add_col(std::size_t i, std::size_t j, const BigInt& q) {
    for (std::size_t r = 0; r < a.rows(); ++r) a(r, i) += q * a(r, j);
    for (std::size_t r = 0; r < v.rows(); ++r) v(r, i) += q * v(r, j);
  }
  void negate_row(std::size_t i) {
    for (std::size_t c = 0; c < a.cols(); ++c) a(i, c) = -a(i, c);
    for (std::size_t c = 0; c < u.cols(); ++c) u(i, c) = -u(i, c);
  }
};

}  // namespace

SmithForm smith_normal_form(const IntMatrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  SnfWork w{m, IntMatrix::identity(rows), IntMatrix::identity(cols)};
  std::size_t t = 0;
  for (; t < std::min(rows, cols); ++t) {
    // Pick the smallest nonzero entry of the trailing block as pivot.
    auto place_min = [&]() -> bool {
      bool found = false;
      BigInt best;
      std::size_t bi = t, bj = t;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j) {
          if (w.a(i, j) == 0) continue;
          BigInt v = abs_big(w.a(i, j));
          if (!found || v < best) {
            found = true;
            best = v;
            bi = i;
            bj = j;
          }
        }
      if (!found) return false;
      w.swap_rows(t, bi);
      w.swap_cols(t, bj);
      return true;
    };
    if (!place_min()) break;
    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (w.a(i, t) == 0) continue;
        BigInt q = w.a(i, t) / w.a(t, t);
        w.add_row(i, t, -q);
        if (w.a(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (w.a(t, j) == 0) continue;
        BigInt q = w.a(t, j) / w.a(t, t);
        w.add_col(j, t, -q);
        if (w.a(t, j) != 0) clean = false;
      }
      if (!clean) {
        // A remainder smaller than the pivot survived; bring it to the pivot.
        std::size_t bi = t, bj = t;
        BigInt best = abs_big(w.a(t, t));
        for (std::size_t i = t + 1; i < rows; ++i)
          if (w.a(i, t) != 0 && abs_big(w.a(i, t)) < best) {
            best = abs_big(w.a(i, t));
            bi = i;
            bj = t;
          }
        for (std::size_t j = t + 1; j < cols; ++j)
          if (w.a(t, j) != 0 && abs_big(w.a(t, j)) < best) {
            best = abs_big(w.a(t, j));
            bi = t;
            bj = j;
          }
        w.swap_rows(t, bi);
        w.swap_cols(t, bj);
        continue;
      }
      bool divides = true;
      for (std::size_t i = t + 1; i < rows && divides; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (w.a(i, j) % w.a(t, t) != 0) {
            w.add_row(t, i, 1);
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (w.a(t, t) < 0) w.negate_row(t);
  }
  SmithForm out{std::move(w.u), std::move(w.a), std::move(w.v), t};
  return out;
}

IntMatrix integer_kernel(const IntMatrix& m) {
  SmithForm s = smith_normal_form(m);
  const std::size_t n = m.cols();
  IntMatrix k(n, n - s.rank);
  for (std::size_t j = s.rank; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) k(i, j - s.rank) = s.V(i, j);
  return k;
}

std::optional<IntMatrix> solve_integer(const IntMatrix& m, const IntMatrix& b) {
  require(b.rows() == m.rows() && b.cols() == 1, "solve_integer: right-hand side shape mismatch");
  SmithForm s = smith_normal_form(m);
  IntMatrix c = s.U * b;
  IntMatrix y(m.cols(), 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (i < s.rank) {
      if (c(i, 0) % s.D(i, i) != 0) return std::nullopt;
      y(i, 0) = c(i, 0) / s.D(i, i);
    } else if (c(i, 0) != 0) {
      return std::nullopt;
    }
  }
  return s.V * y;
}

// ----------------------------------------------------------- conversions

Mat to_real(const IntMatrix& m) {
  Mat r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).convert_to<double>();
  return r;
}

std::optional<IntMatrix> round_to_integer(const Mat& m, double tol) {
  IntMatrix r(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double v = m(i, j);
      if (!std::isfinite(v)) return std::nullopt;
      const double n = std::nearbyint(v);
      if (std::abs(v - n) > tol) return std::nullopt;
      if (std::abs(n) > 9.0e15) return std::nullopt;
      r(i, j) = static_cast<long long>(n);
    }
  return r;
}

long long to_ll(const BigInt& v) {
  if (v > BigInt(std::numeric_limits<long long>::max()) || v < BigInt(std::numeric_limits<long long>::min()))
    fail(ErrorKind::Numerical, "integer entry does not fit in 64 bits");
  return v.convert_to<long long>();
}

std::string to_string(const BigInt& v) { return v.str(); }

std::string to_string(const BigRational& v) {
  if (denominator(v) == 1) return numerator(v).str();
  return numerator(v).str() + "/" + denominator(v).str();
}

BigRational parse_rational(const std::string& text) {
  auto parse_int = [&](const std::string& s) -> BigInt {
    require(!s.empty(), "empty integer in rational '" + text + "'");
    std::size_t k = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    require(k < s.size(), "malformed rational '" + text + "'");
    for (std::size_t i = k; i < s.size(); ++i)
      require(s[i] >= '0' && s[i] <= '9', "malformed rational '" + text + "'");
    // Strip leading zeros: the cpp_int string constructor reads "0..." as octal.
    std::size_t first = k;
    while (first + 1 < s.size() && s[first] == '0') ++first;
    BigInt v(s.substr(first));
    return s[0] == '-' ? BigInt(-v) : v;
  };
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    BigInt p = parse_int(text.substr(0, slash));
    BigInt q = parse_int(text.substr(slash + 1));
    require(q != 0, "zero denominator in '" + text + "'");
    return BigRational(p, q);
  }
  const auto dot = text.find('.');
  if (dot != std::string::npos) {
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    if (digits == "-" || digits == "+" || digits.empty()) digits += "0";
    BigInt p = parse_int(digits);
    BigInt q = 1;
    for (std::size_t i = dot + 1; i < text.size(); ++i) q *= 10;
    return BigRational(p, q);
  }
  return BigRational(parse_int(text));
}

}  // namespace realtori
