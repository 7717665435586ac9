#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace realtori {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using Complex = std::complex<double>;

enum class ErrorKind {
  InvalidInput,  // malformed shapes, violated preconditions
  Unsupported,   // outside the supported range (e.g. g too large)
  Numerical,     // singular denominators, unreachable tolerances
  Internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorKind::InvalidInput, what);
}

// Outcome of a search-based equivalence test.
enum class Verdict { Equivalent, Inequivalent, Undecided };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Equivalent: return "EQUIVALENT";
    case Verdict::Inequivalent: return "INEQUIVALENT";
    case Verdict::Undecided: return "UNDECIDED";
  }
  return "UNDECIDED";
}

template <class Witness>
struct EquivalenceResult {
  Verdict verdict = Verdict::Undecided;
  std::optional<Witness> witness;
  std::size_t candidates_searched = 0;
  std::string note;
};

}  // namespace realtori
