#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace stsk {

using cx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

// Error raised when an input (config file, CLI flag, malformed DM file) is
// invalid. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Error raised when a constructed object violates one of its invariants
// (power constraint, duplicate matrices, non-injective codeword map, ...).
// The CLI maps this to exit code 1.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PowerConstraintViolation : public InvariantViolation {
 public:
  using InvariantViolation::InvariantViolation;
};

class DuplicateCodeword : public InvariantViolation {
 public:
  using InvariantViolation::InvariantViolation;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double frob2(const CMat& a) { return a.squaredNorm(); }

// Column-major stacking of a matrix into a vector.
inline CVec vec(const CMat& a) {
  return Eigen::Map<const CVec>(a.data(), a.size());
}

// I_T (x) H, the block-diagonal matrix with T copies of H.
inline CMat kron_identity(int t, const CMat& h) {
  CMat out = CMat::Zero(h.rows() * t, h.cols() * t);
  for (int i = 0; i < t; ++i)
    out.block(i * h.rows(), i * h.cols(), h.rows(), h.cols()) = h;
  return out;
}

// Canonical byte key of a matrix with entries snapped to a fixed grid.
// Used for robust set membership / duplicate detection on floating-point
// matrices: two matrices closer than ~grid map to the same key.
inline std::string canonical_key(const CMat& a, double grid = 1e-10) {
  std::string key;
  key.reserve(static_cast<size_t>(a.size()) * 16 + 8);
  auto push_i64 = [&key](int64_t v) {
    for (int b = 0; b < 8; ++b) key.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
  };
  push_i64(a.rows());
  push_i64(a.cols());
  for (Eigen::Index c = 0; c < a.cols(); ++c)
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      push_i64(std::llround(a(r, c).real() / grid));
      push_i64(std::llround(a(r, c).imag() / grid));
    }
  return key;
}

inline bool approx_equal(const CMat& a, const CMat& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return (a - b).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace stsk
