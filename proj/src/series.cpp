#include "qwalk/series.hpp"

namespace qwalk {

void ReturnSeries::finalize() {
  cumulative.resize(terms.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (!(terms[i] >= 0.0 && terms[i] <= 1.0 + kExactTol))
      throw Error(ErrorCode::TermOutOfRange,
                  "series term outside [0, 1] at step " + std::to_string(i + 1));
    sum += terms[i];
    cumulative[i] = sum;
  }
  if (kind == SeriesKind::UnmonitoredP0) {
    polya_partial.resize(terms.size());
    double survive = 1.0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      survive *= 1.0 - std::min(terms[i], 1.0);
      polya_partial[i] = 1.0 - survive;
    }
  } else {
    polya_partial.clear();
  }
}

}  // namespace qwalk
