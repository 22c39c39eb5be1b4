#pragma once

#include <random>

#include "qwalk/walkmodel.hpp"

namespace qwalk::testing {

// Deterministic generators for randomized checks; every test fixes its seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double normal() {
    // Box-Muller on the raw uniforms keeps the sequence stdlib-independent.
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u = 0.0;
    do {
      u = uniform();
    } while (u <= 0.0);
    const double v = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u));
    spare_ = radius * std::sin(2.0 * std::numbers::pi * v);
    have_spare_ = true;
    return radius * std::cos(2.0 * std::numbers::pi * v);
  }

  Complex complex_normal() { return {normal(), normal()}; }

  Matrix2 ginibre2() {
    Matrix2 m;
    m << complex_normal(), complex_normal(), complex_normal(), complex_normal();
    return m;
  }

  // Random density matrix: normalized A A^*.
  Matrix2 density2() {
    const Matrix2 a = ginibre2();
    Matrix2 rho = a * a.adjoint();
    return rho / rho.trace().real();
  }

  Vector2 unit_spinor() {
    Vector2 psi(complex_normal(), complex_normal());
    return psi / psi.norm();
  }

  // Haar-ish unitary from the QR of a Ginibre matrix.
  Matrix2 unitary2() {
    const Matrix2 a = ginibre2();
    Eigen::HouseholderQR<Matrix2> qr(a);
    Matrix2 q = qr.householderQ();
    Matrix2 r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < 2; ++i) {
      const Complex d = r(i, i);
      if (std::abs(d) > 0) q.col(i) *= d / std::abs(d);
    }
    return q;
  }

  // Trace-preserving pair: the two 2x2 blocks of the first two columns of a
  // Haar-ish 4x4 unitary.
  CoinPair trace_preserving_pair() {
    Eigen::Matrix4cd a;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) a(i, j) = complex_normal();
    Eigen::HouseholderQR<Eigen::Matrix4cd> qr(a);
    const Eigen::Matrix4cd q = qr.householderQ();
    const Matrix2 left = q.block<2, 2>(0, 0);
    const Matrix2 right = q.block<2, 2>(2, 0);
    return validate_coin_pair(left, right);
  }

  // Unitary-sum pair: the row split of a Haar-ish 2x2 unitary, which is
  // trace preserving as well.
  CoinPair unitary_sum_pair() {
    const Matrix2 u = unitary2();
    Matrix2 right = Matrix2::Zero(), left = Matrix2::Zero();
    right.row(0) = u.row(0);
    left.row(1) = u.row(1);
    return validate_coin_pair(left, right);
  }

  // Normal trace-preserving pair with commuting Grams: common unitary
  // eigenbasis with eigenvalue pairs (l, 1-l), (m, 1-m) and random phases.
  CoinPair normal_pair() {
    const Matrix2 basis = unitary2();
    const double l = uniform(), m = uniform();
    const auto phase = [this]() {
      return std::polar(1.0, 2.0 * std::numbers::pi * uniform());
    };
    Matrix2 dl = Matrix2::Zero(), dr = Matrix2::Zero();
    dl(0, 0) = std::sqrt(l) * phase();
    dl(1, 1) = std::sqrt(m) * phase();
    dr(0, 0) = std::sqrt(1.0 - l) * phase();
    dr(1, 1) = std::sqrt(1.0 - m) * phase();
    return validate_coin_pair(basis * dl * basis.adjoint(),
                              basis * dr * basis.adjoint());
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace qwalk::testing
