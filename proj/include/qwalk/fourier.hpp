#pragma once

#include <array>
#include <vector>

#include "qwalk/walkmodel.hpp"

namespace qwalk {

// Momentum-space symbol of the open walk: e^{ik} (L (x) conj(L)) +
// e^{-ik} (R (x) conj(R)). Its n-th power applied to vec(rho0) gives the
// momentum-space state after n steps.
Matrix4 symbol(const CoinPair& coin, double k);

// Return probability p0(n) by the periodic trapezoid rule on M uniform nodes
// of (-pi, pi]. The integrand is a trigonometric polynomial of degree n, so
// the rule is exact for M > n; M <= n throws NodesTooFew.
double p0_by_quadrature(const CoinPair& coin, const Matrix2& rho0, int n,
                        int nodes);

// Same quantity through the adjoint iteration Y <- e^{ik} L^* Y L +
// e^{-ik} R^* Y R starting from the identity, averaged as tr(rho0 Y_n(k)).
double konno_dual_p0(const CoinPair& coin, const Matrix2& rho0, int n,
                     int nodes);

// Four eigenvalue branches of the symbol over a uniform grid of (-pi, pi],
// matched across neighboring nodes by nearest continuation. Labels carry no
// meaning beyond plotting and may swap at crossings. Eigenvectors are a
// best-effort diagnostic, computed on request.
struct SpectralData {
  std::vector<double> grid;
  std::array<std::vector<Complex>, 4> branches;
  bool has_vectors = false;
  std::array<std::vector<Vector4>, 4> vectors;
};

SpectralData spectral_curves(const CoinPair& coin, int grid_size,
                             bool compute_vectors = false);

// Closed-form largest eigenvalue branch of the nonnormal-preset symbol:
// with u = cos k, xi = (2u + sqrt(4u^2 + 1))^(1/3) and s = xi - 1/xi, the
// branch is s (s^2 + 5) / 6. Equals 1 at k = 0 and 0 at k = pi/2.
double nonnormal_lambda1(double k);

// Trapezoid quadrature of nonnormal_lambda1(k)^n over [-pi/2, pi/2] with
// `intervals` subintervals. The ratio p0(2n) / alpha(2n) tends to 1/pi.
double nonnormal_alpha_integral(int n, int intervals = 20000);

struct DivergenceDiagnostic {
  double slope = 0.0;
  bool diverges_hint = false;
};

// Least-squares slope of log p0(2n) against log n over the trailing `window`
// nonzero even terms; hints divergence of sum p0(n) when the slope is above
// -1 (with a 0.05 margin). even_terms[i] holds p0(2(i+1)). Requires at least
// 20 nonzero terms.
DivergenceDiagnostic divergence_diagnostic(const std::vector<double>& even_terms,
                                           int window);

}  // namespace qwalk
