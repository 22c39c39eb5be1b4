#pragma once

#include <cstdint>
#include <vector>

#include "qwalk/series.hpp"
#include "qwalk/walkmodel.hpp"

namespace qwalk {

// A first-return path of length 2k: steps of +1/-1 whose partial sums stay
// away from 0 until the final step, which closes the excursion.
using FirstReturnPath = std::vector<std::int8_t>;

// Exhaustive enumeration of first-return paths of length 2k. The list has
// (1/(2k-1)) C(2k, k) entries, half of them starting with +1. Guarded at
// 2k <= 30; longer horizons belong to the monitored module.
std::vector<FirstReturnPath> enumerate_first_return_paths(int k);

// Number of first-return paths of length 2k: (1/(2k-1)) C(2k, k).
double first_return_path_count(int k);

// Ordered product of the transition matrices along a path, first step
// applied first (a right step contributes `right`, a left step `left`).
Matrix2 path_product(const CoinPair& coin, const FirstReturnPath& path);

// Sum over all first-return paths of tr(M rho M^*): the open-walk
// probability of first return at step 2k.
double oqw_first_return_term(const CoinPair& coin, const Matrix2& rho, int k);

// Sum over all first-return paths of the path products: the monitored
// first-return operator of the unitary walk at step 2k.
Matrix2 return_amplitude(const CoinPair& coin, int k);

// || sum_paths M psi ||^2: amplitudes summed before squaring. Requires the
// unitary_sum flag.
double uqw_first_return_term(const CoinPair& coin, const Vector2& psi, int k);

// The cross-term sum 2 sum_{C<D} Re<C psi, D psi> over distinct path pairs;
// equals uqw_first_return_term - oqw_first_return_term(|psi><psi|).
double interference_term(const CoinPair& coin, const Vector2& psi, int k);

// Side-by-side exact first-return table for the open and unitary walks
// induced by the same pair, with the interference decomposition.
struct FirstReturnRow {
  int steps = 0;  // 2k
  double oqw_term = 0.0;
  double uqw_term = 0.0;
  double interference = 0.0;
  double oqw_cumulative = 0.0;
  double uqw_cumulative = 0.0;
  double interference_cumulative = 0.0;
};

std::vector<FirstReturnRow> cumulative_return(const CoinPair& coin,
                                              const Vector2& psi, int k_max);

// Open-walk-only variant for a general density; returns a monitored-kind
// series with the odd steps zero.
ReturnSeries cumulative_return(const CoinPair& coin, const Matrix2& rho,
                               int k_max);

}  // namespace qwalk
