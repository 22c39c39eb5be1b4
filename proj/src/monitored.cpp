#include "qwalk/monitored.hpp"

#include <cmath>

#include "qwalk/fourier.hpp"

namespace qwalk {

namespace {

// Shared lattice evolution on the fixed window [-N, N], stepping only the
// sites whose parity matches the step count. `record` receives the origin
// value after each step and returns true when it should be removed (taboo).
template <typename Value, typename Record>
void evolve(const CoinPair& coin, const Value& initial, int horizon,
            Record&& record) {
  const int size = 2 * horizon + 1;
  std::vector<Value> current(size, Value::Zero()), next(size, Value::Zero());
  current[horizon] = initial;
  for (int n = 1; n <= horizon; ++n) {
    const int lo = horizon - n, hi = horizon + n;
    for (int s = lo; s <= hi; s += 2) {
      Value arriving = Value::Zero();
      if constexpr (std::is_same_v<Value, Matrix2>) {
        if (s + 1 <= hi - 1 && !current[s + 1].isZero(0.0))
          arriving += coin.left * current[s + 1] * coin.left.adjoint();
        if (s - 1 >= lo + 1 && !current[s - 1].isZero(0.0))
          arriving += coin.right * current[s - 1] * coin.right.adjoint();
      } else {
        if (s + 1 <= hi - 1) arriving += coin.left * current[s + 1];
        if (s - 1 >= lo + 1) arriving += coin.right * current[s - 1];
      }
      next[s] = arriving;
    }
    current.swap(next);
    double remaining = 0.0;
    for (int s = lo; s <= hi; s += 2) {
      if constexpr (std::is_same_v<Value, Matrix2>)
        remaining += current[s].trace().real();
      else
        remaining += current[s].squaredNorm();
    }
    // The origin is reachable only when n is even; at odd steps its slot
    // holds the stale value from the previous even step.
    const bool origin_live = n % 2 == 0;
    const Value origin_value = origin_live ? current[horizon] : Value::Zero();
    if (record(n, origin_value, remaining) && origin_live)
      current[horizon].setZero();
  }
}

MonitoredRun monitored_oqw_impl(const CoinPair& coin, const Matrix2& rho,
                                int origin, int horizon) {
  MonitoredRun run;
  run.kind = SeriesKind::OqwMonitored;
  run.origin = origin;
  run.series.kind = SeriesKind::OqwMonitored;
  run.series.terms.reserve(horizon);
  run.survival.reserve(horizon);
  run.returned_blocks.reserve(horizon);
  evolve<Matrix2>(coin, rho, horizon,
                  [&](int, const Matrix2& block, double remaining) {
                    const double arrived = block.trace().real();
                    run.series.terms.push_back(arrived);
                    run.survival.push_back(remaining - arrived);
                    run.returned_blocks.push_back(block);
                    return true;
                  });
  run.series.finalize();
  return run;
}

}  // namespace

MonitoredRun uqw_monitored_series(const CoinPair& coin, const Vector2& psi,
                                  int origin, int horizon) {
  if (!coin.unitary_sum)
    throw Error(ErrorCode::CoinNotUnitarySum,
                "monitored unitary walk requires L + R unitary");
  MonitoredRun run;
  run.kind = SeriesKind::UqwMonitored;
  run.origin = origin;
  run.series.kind = SeriesKind::UqwMonitored;
  run.series.terms.reserve(horizon);
  run.survival.reserve(horizon);
  evolve<Vector2>(coin, psi, horizon,
                  [&](int, const Vector2& amp, double remaining) {
                    const double arrived = amp.squaredNorm();
                    run.series.terms.push_back(arrived);
                    run.survival.push_back(remaining - arrived);
                    return true;
                  });
  run.series.finalize();
  return run;
}

MonitoredRun oqw_monitored_series(const CoinPair& coin, const Matrix2& rho,
                                  int origin, int horizon) {
  return monitored_oqw_impl(coin, rho, origin, horizon);
}

ReturnSeries unmonitored_p0_series(const CoinPair& coin, const Matrix2& rho,
                                   int horizon) {
  ReturnSeries series;
  series.kind = SeriesKind::UnmonitoredP0;
  series.terms.reserve(horizon);
  evolve<Matrix2>(coin, rho, horizon,
                  [&](int, const Matrix2& block, double) {
                    series.terms.push_back(block.trace().real());
                    return false;
                  });
  series.finalize();
  return series;
}

ReturnSeries unmonitored_p0_series(const CoinPair& coin, const Vector2& psi,
                                   int horizon) {
  if (!coin.unitary_sum)
    throw Error(ErrorCode::CoinNotUnitarySum,
                "unitary walk requires L + R unitary");
  ReturnSeries series;
  series.kind = SeriesKind::UnmonitoredP0;
  series.terms.reserve(horizon);
  evolve<Vector2>(coin, psi, horizon, [&](int, const Vector2& amp, double) {
    series.terms.push_back(amp.squaredNorm());
    return false;
  });
  series.finalize();
  return series;
}

PolyaResult polya_number(const ReturnSeries& series, int truncation) {
  if (series.kind != SeriesKind::UnmonitoredP0)
    throw Error(ErrorCode::InvalidArgument,
                "Polya numbers are defined for unmonitored series");
  if (truncation < 1 || truncation > series.horizon())
    throw Error(ErrorCode::InvalidArgument, "truncation outside the series");
  for (int n = 1; n <= truncation; ++n)
    if (!(series.term(n) >= 0.0 && series.term(n) <= 1.0 + kExactTol))
      throw Error(ErrorCode::TermOutOfRange,
                  "p0 term outside [0, 1] at step " + std::to_string(n));

  PolyaResult result;
  result.partial = series.polya_partial.at(truncation - 1);

  std::vector<double> even_terms;
  for (int n = 2; n <= truncation; n += 2) even_terms.push_back(series.term(n));
  try {
    const int window = std::max<int>(20, static_cast<int>(even_terms.size() / 2));
    const DivergenceDiagnostic diag = divergence_diagnostic(even_terms, window);
    result.slope = diag.slope;
    result.diverges_hint = diag.diverges_hint;
    result.slope_valid = true;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InsufficientData) throw;
  }
  return result;
}

}  // namespace qwalk
