#pragma once

#include <array>
#include <map>
#include <string>

#include "qwalk/walkmodel.hpp"

namespace qwalk {

enum class Verdict { Recurrent, TransientForSomeDensity, Inconclusive };

std::string to_string(Verdict verdict);

// Closed-form recurrence verdict with its certificate: the rule that fired
// and the spectral data it used. per_density_return is filled when the
// normal-pair closed form applies; the keys are the eigenbasis matrix units.
struct RecurrenceVerdict {
  Verdict verdict = Verdict::Inconclusive;
  std::string rule;
  std::array<double, 2> left_gram_eigenvalues{};   // eigenvalues of L^*L
  std::array<double, 2> right_gram_eigenvalues{};  // eigenvalues of R^*R
  std::array<double, 2> singular_bounds{};         // lower, upper
  bool pq = false;
  std::map<std::string, double> per_density_return;
};

// Eigenvalue-one-half criterion: if every eigenvalue of L^*L and R^*R is 1/2
// the walk is recurrent; when both matrices are normal the converse holds,
// so any other spectrum is transient for some density. Eigenvalues in the
// gray band between 1e-10 and 1e-8 of 1/2 yield Inconclusive rather than a
// sharp verdict.
RecurrenceVerdict eigen_half_criterion(const CoinPair& coin);

// Exact return probability for normal pairs with commuting Grams:
// (1 - |1 - 2 lambda|) x11 + (1 - |1 - 2 mu|) (1 - x11), where lambda, mu are
// the L^*L eigenvalues in the common eigenbasis and x11 is the corresponding
// diagonal entry of the rotated density.
double normal_return_probability(const CoinPair& coin, const Matrix2& rho);

// Singular-value sandwich: with y = sigma(L)^2 sigma(R)^2 taken at the
// extremes, 1 - sqrt(1 - 4 y_min) <= R(rho) <= 1 - sqrt(1 - 4 y_max) (the
// upper end clamps to 1 when y_max >= 1/4).
std::array<double, 2> singular_value_bounds(const CoinPair& coin);

// True iff each matrix of the pair is diagonal or antidiagonal.
bool detect_pq(const CoinPair& coin);

// Partial sums of sum_k (1/(2k-1)) C(2k,k) y^k, with an analytic tail bound;
// the limit is 1 - sqrt(1 - 4y). Exposed for verification of the closed form.
struct ReturnSeriesPartial {
  double partial = 0.0;
  double tail_bound = 0.0;
};
ReturnSeriesPartial classical_return_series_partial(double y, int terms);

}  // namespace qwalk
