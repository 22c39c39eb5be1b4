#pragma once

#include <vector>

#include "qwalk/types.hpp"

namespace qwalk {

enum class SeriesKind { OqwMonitored, UqwMonitored, UnmonitoredP0 };

// Per-step probability series: first-return terms (monitored kinds) or
// plain return probabilities p0(n) (unmonitored kind). terms[i] holds the
// value at step n = i + 1. polya_partial is filled for the unmonitored kind
// only: 1 - prod_{m<=n} (1 - p0(m)).
struct ReturnSeries {
  SeriesKind kind = SeriesKind::OqwMonitored;
  std::vector<double> terms;
  std::vector<double> cumulative;
  std::vector<double> polya_partial;

  int horizon() const { return static_cast<int>(terms.size()); }
  double term(int n) const { return terms.at(n - 1); }
  double cumulative_at(int n) const { return cumulative.at(n - 1); }

  // Recomputes cumulative sums (and Polya partial products for the
  // unmonitored kind) from terms. Throws TermOutOfRange on terms outside
  // [0, 1 + 1e-12].
  void finalize();
};

}  // namespace qwalk
