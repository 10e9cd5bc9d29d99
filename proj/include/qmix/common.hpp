// Shared numeric types and the error hierarchy used across qmix.
#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qmix {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr cplx kI{0.0, 1.0};

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad shapes, out-of-range parameters, malformed input files.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Input is well formed but violates a mathematical constraint of the domain
/// (non-unitary coefficients, degenerate weights, ...).
class ConstraintViolation : public Error {
 public:
  using Error::Error;
};

class NotBlockDiagonal : public ConstraintViolation {
 public:
  using ConstraintViolation::ConstraintViolation;
};

class NonUnitaryBlock : public ConstraintViolation {
 public:
  NonUnitaryBlock(std::size_t irrep_index, const std::string& label, double residual)
      : ConstraintViolation("block for irrep '" + label + "' is not unitary (residual " +
                            std::to_string(residual) + ")"),
        irrep_index_(irrep_index),
        residual_(residual) {}
  std::size_t irrep_index() const noexcept { return irrep_index_; }
  double residual() const noexcept { return residual_; }

 private:
  std::size_t irrep_index_;
  double residual_;
};

class NonUnitaryCoefficients : public ConstraintViolation {
 public:
  using ConstraintViolation::ConstraintViolation;
};

class GaugeViolation : public ConstraintViolation {
 public:
  using ConstraintViolation::ConstraintViolation;
};

/// Some weight p_k vanishes, so the phase of q_k is undefined. The weights
/// themselves are still well defined and travel with the exception.
class DegenerateWeight : public ConstraintViolation {
 public:
  DegenerateWeight(const std::string& what, std::array<double, 3> weights)
      : ConstraintViolation(what), weights_(weights) {}
  const std::array<double, 3>& weights() const noexcept { return weights_; }

 private:
  std::array<double, 3> weights_;
};

class DegenerateOuterWeight : public ConstraintViolation {
 public:
  using ConstraintViolation::ConstraintViolation;
};

class NotNested : public ConstraintViolation {
 public:
  using ConstraintViolation::ConstraintViolation;
};

class CoefficientSumNonzero : public ConstraintViolation {
 public:
  using ConstraintViolation::ConstraintViolation;
};

/// Largest absolute entry of U U^dagger - I.
double unitarity_residual(const CMatrix& u);

inline bool is_unitary(const CMatrix& u, double tol = 1e-10) {
  return u.rows() == u.cols() && unitarity_residual(u) < tol;
}

inline double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace qmix
