#pragma once

#include "qwalk/series.hpp"
#include "qwalk/walkmodel.hpp"

namespace qwalk {

// Result of a monitored (taboo) evolution up to horizon N. The series holds
// the first-return probability at each step; survival[n-1] is the mass that
// has not yet returned after step n. For open runs, returned_blocks[n-1] is
// the positive matrix that arrived at the origin at step n (its trace is the
// series term), so the density at the moment of return is available too.
struct MonitoredRun {
  SeriesKind kind = SeriesKind::OqwMonitored;
  int origin = 0;
  ReturnSeries series;
  std::vector<double> survival;
  std::vector<Matrix2> returned_blocks;
};

// Unitary monitored first-return series: the origin amplitude is recorded
// and projected out after every step, so term(n) = ||a_n psi||^2 with
// a_n = P U ((I-P) U)^{n-1}. Requires the unitary_sum flag; psi is the
// initial spinor at the origin.
MonitoredRun uqw_monitored_series(const CoinPair& coin, const Vector2& psi,
                                  int origin, int horizon);

// Open-walk taboo evolution: the origin block is recorded and removed after
// every step; term(n) is the trace arriving at the origin at step n.
MonitoredRun oqw_monitored_series(const CoinPair& coin, const Matrix2& rho,
                                  int origin, int horizon);

// Unmonitored return probabilities p0(n): full evolution, no projection.
ReturnSeries unmonitored_p0_series(const CoinPair& coin, const Matrix2& rho,
                                   int horizon);
ReturnSeries unmonitored_p0_series(const CoinPair& coin, const Vector2& psi,
                                   int horizon);

struct PolyaResult {
  double partial = 0.0;      // 1 - prod_{n<=N} (1 - p0(n))
  double slope = 0.0;        // trailing log-log slope of the even terms
  bool diverges_hint = false;
  bool slope_valid = false;  // false when too few nonzero terms
};

// Polya partial number of an unmonitored series truncated at N, with the
// divergence hint from the trailing-slope diagnostic.
PolyaResult polya_number(const ReturnSeries& series, int truncation);

}  // namespace qwalk
