#include "qwalk/matkernel.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace qwalk {

Matrix4 channel_matrix(std::span<const Matrix2> kraus) {
  if (kraus.empty())
    throw Error(ErrorCode::InvalidArgument, "channel_matrix: empty Kraus list");
  Matrix4 out = Matrix4::Zero();
  for (const Matrix2& b : kraus) out += kron(b, b.conjugate());
  return out;
}

std::array<double, 2> hermitian_eigenvalues(const Matrix2& a) {
  if (max_abs(a - a.adjoint()) >= kExactTol)
    throw Error(ErrorCode::InvalidArgument,
                "hermitian_eigenvalues: input is not Hermitian");
  const double mean = 0.5 * (a(0, 0).real() + a(1, 1).real());
  const double half_gap = 0.5 * (a(0, 0).real() - a(1, 1).real());
  const double radius = std::hypot(half_gap, std::abs(a(0, 1)));
  return {mean + radius, mean - radius};
}

std::array<double, 2> singular_values(const Matrix2& a) {
  const Matrix2 gram = a.adjoint() * a;
  // Force exact Hermiticity so rounding in the product cannot trip the check.
  Matrix2 sym = 0.5 * (gram + gram.adjoint());
  auto eigs = hermitian_eigenvalues(sym);
  return {std::sqrt(std::max(eigs[0], 0.0)), std::sqrt(std::max(eigs[1], 0.0))};
}

std::array<Complex, 4> eigenvalues4(const Matrix4& m) {
  Eigen::ComplexEigenSolver<Matrix4> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::EigenFailure, "eigenvalues4: iteration failed");
  const Vector4 vals = solver.eigenvalues();
  return {vals(0), vals(1), vals(2), vals(3)};
}

}  // namespace qwalk
