#include "qwalk/criteria.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace qwalk {

namespace {

constexpr double kHalfTol = 1e-10;
constexpr double kGrayBand = 1e-8;
constexpr double kNormalTol = 1e-10;

double closed_form_return(double eigenvalue) {
  return 1.0 - std::abs(1.0 - 2.0 * eigenvalue);
}

// Common eigenbasis of L^*L (and hence of R^*R = I - L^*L): returns the
// unitary whose columns carry the descending eigenvalues.
Matrix2 gram_eigenbasis(const Matrix2& gram) {
  Eigen::SelfAdjointEigenSolver<Matrix2> solver(gram);
  Matrix2 basis;
  basis.col(0) = solver.eigenvectors().col(1);  // descending order
  basis.col(1) = solver.eigenvectors().col(0);
  return basis;
}

}  // namespace

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Recurrent:
      return "Recurrent";
    case Verdict::TransientForSomeDensity:
      return "TransientForSomeDensity";
    case Verdict::Inconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

RecurrenceVerdict eigen_half_criterion(const CoinPair& coin) {
  if (!coin.trace_preserving)
    throw Error(ErrorCode::NotTracePreserving,
                "criterion requires a trace-preserving pair");
  RecurrenceVerdict result;
  result.left_gram_eigenvalues =
      hermitian_eigenvalues(coin.left.adjoint() * coin.left);
  result.right_gram_eigenvalues =
      hermitian_eigenvalues(coin.right.adjoint() * coin.right);
  result.singular_bounds = singular_value_bounds(coin);
  result.pq = detect_pq(coin);

  double max_half_distance = 0.0;
  for (double v : result.left_gram_eigenvalues)
    max_half_distance = std::max(max_half_distance, std::abs(v - 0.5));
  for (double v : result.right_gram_eigenvalues)
    max_half_distance = std::max(max_half_distance, std::abs(v - 0.5));

  const bool both_normal = coin.left_normal && coin.right_normal;
  if (both_normal) {
    result.per_density_return["E11"] = closed_form_return(
        result.left_gram_eigenvalues[0]);
    result.per_density_return["E22"] = closed_form_return(
        result.left_gram_eigenvalues[1]);
  }

  if (max_half_distance < kHalfTol) {
    result.verdict = Verdict::Recurrent;
    result.rule = "eigenvalue-half forward";
  } else if (max_half_distance < kGrayBand) {
    result.verdict = Verdict::Inconclusive;
    result.rule = "near-boundary spectrum; no sharp verdict";
  } else if (both_normal) {
    result.verdict = Verdict::TransientForSomeDensity;
    result.rule = "eigenvalue-half converse (both normal)";
  } else if (coin.unital && (coin.left_normal || coin.right_normal)) {
    result.verdict = Verdict::TransientForSomeDensity;
    result.rule =
        "eigenvalue-half converse (unital, one normal; no reference value "
        "available for this branch)";
  } else {
    result.verdict = Verdict::Inconclusive;
    result.rule = "hypotheses not met; see bounds and series evidence";
  }
  return result;
}

double normal_return_probability(const CoinPair& coin, const Matrix2& rho) {
  if (!coin.trace_preserving)
    throw Error(ErrorCode::NotTracePreserving,
                "closed form requires a trace-preserving pair");
  if (!coin.left_normal || !coin.right_normal)
    throw Error(ErrorCode::HypothesisViolated,
                "closed form requires both matrices normal");
  const Matrix2 left_gram = coin.left.adjoint() * coin.left;
  const Matrix2 right_gram = coin.right.adjoint() * coin.right;
  if (max_abs(left_gram * right_gram - right_gram * left_gram) >= kNormalTol)
    throw Error(ErrorCode::HypothesisViolated,
                "closed form requires commuting Gram matrices");

  const auto eigs = hermitian_eigenvalues(0.5 * (left_gram + left_gram.adjoint()));
  const Matrix2 basis = gram_eigenbasis(left_gram);
  const double x11 = (basis.adjoint() * rho * basis)(0, 0).real();
  return closed_form_return(eigs[0]) * x11 +
         closed_form_return(eigs[1]) * (1.0 - x11);
}

std::array<double, 2> singular_value_bounds(const CoinPair& coin) {
  if (!coin.trace_preserving)
    throw Error(ErrorCode::NotTracePreserving,
                "bounds require a trace-preserving pair");
  const auto left_sv = singular_values(coin.left);
  const auto right_sv = singular_values(coin.right);
  // sqrt(1 - 4y) is infinitely steep at y = 1/4; values within rounding of
  // the critical point are treated as exactly critical.
  const auto snap = [](double y) {
    return std::abs(y - 0.25) < 1e-14 ? 0.25 : y;
  };
  const double y_min =
      snap(left_sv[1] * left_sv[1] * right_sv[1] * right_sv[1]);
  const double y_max =
      snap(left_sv[0] * left_sv[0] * right_sv[0] * right_sv[0]);
  const double lower = 1.0 - std::sqrt(std::max(1.0 - 4.0 * y_min, 0.0));
  const double upper =
      y_max < 0.25 ? std::min(1.0, 1.0 - std::sqrt(1.0 - 4.0 * y_max)) : 1.0;
  return {lower, upper};
}

bool detect_pq(const CoinPair& coin) {
  return is_pq_matrix(coin.left) && is_pq_matrix(coin.right);
}

ReturnSeriesPartial classical_return_series_partial(double y, int terms) {
  if (!(y >= 0.0 && y <= 0.25))
    throw Error(ErrorCode::InvalidArgument,
                "series is summed for y in [0, 1/4]");
  ReturnSeriesPartial out;
  double term = 2.0 * y;  // k = 1: (1/1) C(2,1) y
  for (int k = 1; k <= terms; ++k) {
    out.partial += term;
    term *= y * (2.0 * k - 1.0) * (2.0 * k + 2.0) / ((k + 1.0) * (k + 1.0));
  }
  // Ratios increase toward 4y, so a geometric bound holds strictly below
  // y = 1/4; at y = 1/4 fall back to the p-series integral bound.
  if (4.0 * y < 1.0)
    out.tail_bound = term / (1.0 - 4.0 * y);
  else
    out.tail_bound = 1.0 / std::sqrt(std::numbers::pi * (terms - 1.0));
  return out;
}

}  // namespace qwalk
