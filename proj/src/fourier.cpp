#include "qwalk/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace qwalk {

namespace {

constexpr double kPi = std::numbers::pi;

double node(int m, int nodes) { return -kPi + 2.0 * kPi * (m + 1) / nodes; }

void require_nodes(int n, int nodes) {
  if (nodes <= n)
    throw Error(ErrorCode::NodesTooFew,
                "quadrature with " + std::to_string(nodes) +
                    " nodes aliases a degree-" + std::to_string(n) +
                    " integrand");
}

}  // namespace

Matrix4 symbol(const CoinPair& coin, double k) {
  const Complex phase = std::polar(1.0, k);
  return phase * kron(coin.left, coin.left.conjugate()) +
         std::conj(phase) * kron(coin.right, coin.right.conjugate());
}

double p0_by_quadrature(const CoinPair& coin, const Matrix2& rho0, int n,
                        int nodes) {
  require_nodes(n, nodes);
  const Vector4 v0 = vec(rho0);
  Complex total = 0.0;
  for (int m = 0; m < nodes; ++m) {
    const Matrix4 s = symbol(coin, node(m, nodes));
    Vector4 v = v0;
    for (int step = 0; step < n; ++step) v = s * v;
    total += v(0) + v(3);  // trace of unvec(v)
  }
  return (total / static_cast<double>(nodes)).real();
}

double konno_dual_p0(const CoinPair& coin, const Matrix2& rho0, int n,
                     int nodes) {
  require_nodes(n, nodes);
  Complex total = 0.0;
  for (int m = 0; m < nodes; ++m) {
    const Complex phase = std::polar(1.0, node(m, nodes));
    Matrix2 y = Matrix2::Identity();
    for (int step = 0; step < n; ++step)
      y = phase * (coin.left.adjoint() * y * coin.left) +
          std::conj(phase) * (coin.right.adjoint() * y * coin.right);
    total += (rho0 * y).trace();
  }
  return (total / static_cast<double>(nodes)).real();
}

SpectralData spectral_curves(const CoinPair& coin, int grid_size,
                             bool compute_vectors) {
  if (grid_size < 2)
    throw Error(ErrorCode::InvalidArgument, "spectral grid needs >= 2 nodes");
  SpectralData data;
  data.grid.resize(grid_size);
  for (auto& branch : data.branches) branch.resize(grid_size);
  data.has_vectors = compute_vectors;
  if (compute_vectors)
    for (auto& branch : data.vectors) branch.resize(grid_size);

  std::array<int, 4> order{0, 1, 2, 3};
  for (int m = 0; m < grid_size; ++m) {
    const double k = node(m, grid_size);
    data.grid[m] = k;
    Eigen::ComplexEigenSolver<Matrix4> solver(symbol(coin, k), compute_vectors);
    if (solver.info() != Eigen::Success)
      throw Error(ErrorCode::EigenFailure,
                  "eigen decomposition failed at k = " + std::to_string(k));
    const Vector4 vals = solver.eigenvalues();

    if (m == 0) {
      std::iota(order.begin(), order.end(), 0);
    } else {
      // Nearest continuation: among all assignments of the four fresh values
      // to the four branches, keep the one with the least total movement.
      std::array<int, 4> perm{0, 1, 2, 3}, best{0, 1, 2, 3};
      double best_cost = std::numeric_limits<double>::infinity();
      do {
        double cost = 0.0;
        for (int j = 0; j < 4; ++j)
          cost += std::abs(vals(perm[j]) - data.branches[j][m - 1]);
        if (cost < best_cost) {
          best_cost = cost;
          best = perm;
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
      order = best;
    }
    for (int j = 0; j < 4; ++j) {
      data.branches[j][m] = vals(order[j]);
      if (compute_vectors)
        data.vectors[j][m] = solver.eigenvectors().col(order[j]);
    }
  }
  return data;
}

double nonnormal_lambda1(double k) {
  const double u = std::cos(k);
  const double xi = std::cbrt(2.0 * u + std::sqrt(4.0 * u * u + 1.0));
  const double s = xi - 1.0 / xi;
  return s * (s * s + 5.0) / 6.0;
}

double nonnormal_alpha_integral(int n, int intervals) {
  if (n < 0 || intervals < 1)
    throw Error(ErrorCode::InvalidArgument, "alpha integral needs n, M >= 0");
  const double h = kPi / intervals;
  double total = 0.0;
  for (int m = 0; m <= intervals; ++m) {
    const double k = -kPi / 2.0 + m * h;
    const double weight = (m == 0 || m == intervals) ? 0.5 : 1.0;
    total += weight * std::pow(nonnormal_lambda1(k), n);
  }
  return total * h;
}

DivergenceDiagnostic divergence_diagnostic(const std::vector<double>& even_terms,
                                           int window) {
  std::vector<double> log_n, log_p;
  for (std::size_t i = 0; i < even_terms.size(); ++i) {
    if (even_terms[i] > 0.0) {
      log_n.push_back(std::log(static_cast<double>(i + 1)));
      log_p.push_back(std::log(even_terms[i]));
    }
  }
  if (log_n.size() < 20)
    throw Error(ErrorCode::InsufficientData,
                "divergence diagnostic needs >= 20 nonzero terms");
  const std::size_t use = std::min<std::size_t>(
      log_n.size(), static_cast<std::size_t>(std::max(window, 2)));
  const std::size_t first = log_n.size() - use;

  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = first; i < log_n.size(); ++i) {
    mean_x += log_n[i];
    mean_y += log_p[i];
  }
  mean_x /= use;
  mean_y /= use;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = first; i < log_n.size(); ++i) {
    sxx += (log_n[i] - mean_x) * (log_n[i] - mean_x);
    sxy += (log_n[i] - mean_x) * (log_p[i] - mean_y);
  }
  DivergenceDiagnostic diag;
  diag.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  diag.diverges_hint = diag.slope >= -1.0 + 0.05;
  return diag;
}

}  // namespace qwalk
