#pragma once

#include <array>
#include <span>

#include "qwalk/types.hpp"

namespace qwalk {

// Row-major flattening: vec([[a,b],[c,d]]) = (a, b, c, d)^T.
// Satisfies vec(A X B) = (A (x) B^T) vec(X), hence vec(B X B^*) = (B (x) conj(B)) vec(X).
template <typename Derived>
auto vec(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  constexpr int R = Derived::RowsAtCompileTime;
  constexpr int C = Derived::ColsAtCompileTime;
  constexpr int N =
      (R == Eigen::Dynamic || C == Eigen::Dynamic) ? Eigen::Dynamic : R * C;
  Eigen::Matrix<Scalar, N, 1> out(a.rows() * a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out(i * a.cols() + j) = a(i, j);
  return out;
}

inline Matrix2 unvec(const Vector4& v) {
  Matrix2 m;
  m << v(0), v(1), v(2), v(3);
  return m;
}

inline MatrixX unvec(const VectorX& v, Eigen::Index dim) {
  MatrixX m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = v(i * dim + j);
  return m;
}

template <typename DerivedA, typename DerivedB>
auto kron(const Eigen::MatrixBase<DerivedA>& a,
          const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  constexpr int Ra = DerivedA::RowsAtCompileTime;
  constexpr int Rb = DerivedB::RowsAtCompileTime;
  constexpr int Ca = DerivedA::ColsAtCompileTime;
  constexpr int Cb = DerivedB::ColsAtCompileTime;
  constexpr int R = (Ra == Eigen::Dynamic || Rb == Eigen::Dynamic)
                        ? Eigen::Dynamic
                        : Ra * Rb;
  constexpr int C = (Ca == Eigen::Dynamic || Cb == Eigen::Dynamic)
                        ? Eigen::Dynamic
                        : Ca * Cb;
  Eigen::Matrix<Scalar, R, C> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Matrix representation of a Kraus map: sum_i B_i (x) conj(B_i). Applied to
// vec(rho) it yields vec(sum_i B_i rho B_i^*).
Matrix4 channel_matrix(std::span<const Matrix2> kraus);

// Closed-form eigenvalues of a 2x2 Hermitian matrix, sorted descending.
// Rejects inputs with ||A - A^*||_max >= 1e-12.
std::array<double, 2> hermitian_eigenvalues(const Matrix2& a);

// Singular values of a 2x2 matrix, sorted descending.
std::array<double, 2> singular_values(const Matrix2& a);

// Eigenvalues of a general complex 4x4 matrix, with multiplicity. Each value
// satisfies |det(M - lambda I)| < 1e-8 ||M||.
std::array<Complex, 4> eigenvalues4(const Matrix4& m);

}  // namespace qwalk
