#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "realtori/common.hpp"

namespace realtori {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// Dense row-major matrix over an exact ring. Used with BigInt (IntMatrix)
// and BigRational (RatMatrix); rationals stay canonical because cpp_rational
// normalizes on every operation.
template <class T>
class ExactMatrix {
 public:
  ExactMatrix() = default;
  ExactMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  ExactMatrix(std::size_t rows, std::size_t cols, std::vector<T> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    require(data_.size() == rows_ * cols_, "matrix entry count does not match dimensions");
  }
  ExactMatrix(std::initializer_list<std::initializer_list<long long>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      require(r.size() == cols_, "ragged initializer");
      for (long long v : r) data_.emplace_back(v);
    }
  }

  static ExactMatrix identity(std::size_t n) {
    ExactMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  const std::vector<T>& entries() const { return data_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  bool operator==(const ExactMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }
  bool operator!=(const ExactMatrix& o) const { return !(*this == o); }
  bool operator<(const ExactMatrix& o) const {
    if (rows_ != o.rows_) return rows_ < o.rows_;
    if (cols_ != o.cols_) return cols_ < o.cols_;
    return data_ < o.data_;
  }

  ExactMatrix transpose() const {
    ExactMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  ExactMatrix operator*(const ExactMatrix& o) const {
    require(cols_ == o.rows_, "matrix product shape mismatch");
    ExactMatrix p(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const T& a = (*this)(i, k);
        if (a == 0) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) p(i, j) += a * o(k, j);
      }
    return p;
  }
  ExactMatrix operator+(const ExactMatrix& o) const {
    require(rows_ == o.rows_ && cols_ == o.cols_, "matrix sum shape mismatch");
    ExactMatrix s(*this);
    for (std::size_t i = 0; i < data_.size(); ++i) s.data_[i] += o.data_[i];
    return s;
  }
  ExactMatrix operator-(const ExactMatrix& o) const {
    require(rows_ == o.rows_ && cols_ == o.cols_, "matrix difference shape mismatch");
    ExactMatrix s(*this);
    for (std::size_t i = 0; i < data_.size(); ++i) s.data_[i] -= o.data_[i];
    return s;
  }
  ExactMatrix operator-() const {
    ExactMatrix s(*this);
    for (auto& v : s.data_) v = -v;
    return s;
  }
  ExactMatrix scaled(const T& c) const {
    ExactMatrix s(*this);
    for (auto& v : s.data_) v *= c;
    return s;
  }

  ExactMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    require(r0 + nr <= rows_ && c0 + nc <= cols_, "block out of range");
    ExactMatrix b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }
  void set_block(std::size_t r0, std::size_t c0, const ExactMatrix& b) {
    require(r0 + b.rows_ <= rows_ && c0 + b.cols_ <= cols_, "block out of range");
    for (std::size_t i = 0; i < b.rows_; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }

  bool is_zero() const {
    for (const auto& v : data_)
      if (v != 0) return false;
    return true;
  }
  bool is_symmetric() const {
    if (!is_square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i + 1; j < cols_; ++j)
        if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = ExactMatrix<BigInt>;
using RatMatrix = ExactMatrix<BigRational>;

// Square or rectangular matrix over GF(2), one 64-bit word per row.
class Gf2Matrix {
 public:
  Gf2Matrix() = default;
  Gf2Matrix(std::size_t rows, std::size_t cols);
  static Gf2Matrix identity(std::size_t n);
  // Builds a symmetric matrix; rejects asymmetric bit patterns.
  static Gf2Matrix symmetric(const std::vector<std::vector<int>>& bits);
  static Gf2Matrix from_int(const IntMatrix& m);  // entries reduced mod 2

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool get(std::size_t i, std::size_t j) const { return (row_[i] >> j) & 1u; }
  void set(std::size_t i, std::size_t j, bool v);
  std::uint64_t row_bits(std::size_t i) const { return row_[i]; }
  void set_row_bits(std::size_t i, std::uint64_t bits) { row_[i] = bits & mask(); }
  bool symmetric_flag() const { return symmetric_; }
  bool is_symmetric() const;

  Gf2Matrix transpose() const;
  Gf2Matrix operator*(const Gf2Matrix& o) const;
  bool operator==(const Gf2Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && row_ == o.row_;
  }
  bool operator!=(const Gf2Matrix& o) const { return !(*this == o); }
  IntMatrix to_int() const;

 private:
  std::uint64_t mask() const { return cols_ == 64 ? ~0ull : ((1ull << cols_) - 1); }
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<std::uint64_t> row_;
  bool symmetric_ = false;
};

BigInt det_int(const IntMatrix& m);
BigRational det_rat(const RatMatrix& m);
bool is_unimodular(const IntMatrix& m);

// Exact inverse of a unimodular matrix; throws if |det| != 1.
IntMatrix unimodular_inverse(const IntMatrix& m);
// Exact inverse over Q; throws on singular input.
RatMatrix rational_inverse(const RatMatrix& m);
RatMatrix to_rational(const IntMatrix& m);
std::optional<IntMatrix> to_integer(const RatMatrix& m);

IntMatrix symplectic_J(std::size_t g);
Mat symplectic_J_real(std::size_t g);
bool is_symplectic(const IntMatrix& m);
bool is_symplectic(const Mat& m, double tol = 1e-10);
IntMatrix symplectic_inverse(const IntMatrix& m);
Mat symplectic_inverse(const Mat& m, double tol = 1e-10);
IntMatrix block_matrix(const IntMatrix& a, const IntMatrix& b, const IntMatrix& c, const IntMatrix& d);

std::size_t gf2_rank(const Gf2Matrix& n);
std::optional<Gf2Matrix> gf2_inverse(const Gf2Matrix& m);

struct SmithForm {
  IntMatrix U, D, V;  // U * M * V = D
  std::size_t rank = 0;
};
SmithForm smith_normal_form(const IntMatrix& m);

// Saturated Z-basis (columns) of {x in Z^n : M x = 0}.
IntMatrix integer_kernel(const IntMatrix& m);
// Some integer solution of M x = b, if one exists.
std::optional<IntMatrix> solve_integer(const IntMatrix& m, const IntMatrix& b);

Mat to_real(const IntMatrix& m);
// Rounds every entry to the nearest integer; nullopt if any entry is farther than tol.
std::optional<IntMatrix> round_to_integer(const Mat& m, double tol);
long long to_ll(const BigInt& v);  // throws on overflow
std::string to_string(const BigInt& v);
std::string to_string(const BigRational& v);
BigRational parse_rational(const std::string& text);

}  // namespace realtori
