#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qwalk {

using Complex = std::complex<double>;
using Matrix2 = Eigen::Matrix2cd;
using Matrix4 = Eigen::Matrix4cd;
using MatrixX = Eigen::MatrixXcd;
using Vector2 = Eigen::Vector2cd;
using Vector4 = Eigen::Vector4cd;
using VectorX = Eigen::VectorXcd;

// Default tolerances: absolute for exactly representable rational targets,
// relative for iterative results.
inline constexpr double kExactTol = 1e-12;
inline constexpr double kIterativeTol = 1e-8;
inline constexpr double kMassTol = 1e-10;

enum class ErrorCode {
  NotTracePreserving,
  CoinNotUnitarySum,
  CostGuardExceeded,
  DegenerateStep,
  NodesTooFew,
  InsufficientData,
  ColumnNotNormalized,
  NotConverged,
  NonUnique,
  TailTooLarge,
  TermOutOfRange,
  HypothesisViolated,
  EigenFailure,
  InvalidArgument,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& a) {
  return a.cwiseAbs().maxCoeff();
}

}  // namespace qwalk
