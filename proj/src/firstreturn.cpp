#include "qwalk/firstreturn.hpp"

#include <cmath>

namespace qwalk {

namespace {

constexpr int kMaxPathLength = 30;

// Paths with this many entries or fewer use the quadratic pairwise route for
// the interference term; beyond it the identity route is used instead.
constexpr std::size_t kPairwiseLimit = 10000;

void extend(FirstReturnPath& path, int position, int length,
            std::vector<FirstReturnPath>& out) {
  const int n = static_cast<int>(path.size());
  if (n == length) {
    out.push_back(path);
    return;
  }
  for (int step : {+1, -1}) {
    const int next = position + step;
    const bool closes = next == 0;
    if (closes != (n + 1 == length)) continue;
    if (std::abs(next) > length - (n + 1)) continue;
    path.push_back(static_cast<std::int8_t>(step));
    extend(path, next, length, out);
    path.pop_back();
  }
}

void require_unitary_sum(const CoinPair& coin) {
  if (!coin.unitary_sum)
    throw Error(ErrorCode::CoinNotUnitarySum,
                "unitary-walk quantities require L + R unitary");
}

}  // namespace

std::vector<FirstReturnPath> enumerate_first_return_paths(int k) {
  if (k < 1)
    throw Error(ErrorCode::InvalidArgument, "first-return paths need k >= 1");
  if (2 * k > kMaxPathLength)
    throw Error(ErrorCode::CostGuardExceeded,
                "path enumeration is guarded at 2k <= " +
                    std::to_string(kMaxPathLength));
  std::vector<FirstReturnPath> out;
  FirstReturnPath path;
  path.push_back(+1);
  extend(path, +1, 2 * k, out);
  // Mirror the positive excursions to get the negative ones.
  const std::size_t half = out.size();
  for (std::size_t i = 0; i < half; ++i) {
    FirstReturnPath flipped = out[i];
    for (auto& s : flipped) s = -s;
    out.push_back(std::move(flipped));
  }
  return out;
}

double first_return_path_count(int k) {
  double binomial = 1.0;
  for (int j = 1; j <= k; ++j) binomial *= static_cast<double>(k + j) / j;
  return binomial / (2 * k - 1);
}

Matrix2 path_product(const CoinPair& coin, const FirstReturnPath& path) {
  Matrix2 product = Matrix2::Identity();
  for (std::int8_t step : path)
    product = (step > 0 ? coin.right : coin.left) * product;
  return product;
}

double oqw_first_return_term(const CoinPair& coin, const Matrix2& rho, int k) {
  double total = 0.0;
  for (const FirstReturnPath& path : enumerate_first_return_paths(k)) {
    const Matrix2 m = path_product(coin, path);
    total += (m * rho * m.adjoint()).trace().real();
  }
  return total;
}

Matrix2 return_amplitude(const CoinPair& coin, int k) {
  Matrix2 total = Matrix2::Zero();
  for (const FirstReturnPath& path : enumerate_first_return_paths(k))
    total += path_product(coin, path);
  return total;
}

double uqw_first_return_term(const CoinPair& coin, const Vector2& psi, int k) {
  require_unitary_sum(coin);
  return (return_amplitude(coin, k) * psi).squaredNorm();
}

double interference_term(const CoinPair& coin, const Vector2& psi, int k) {
  require_unitary_sum(coin);
  const auto paths = enumerate_first_return_paths(k);
  if (paths.size() > kPairwiseLimit) {
    // Identity route: || sum_C C psi ||^2 - sum_C || C psi ||^2.
    const Matrix2 rho = psi * psi.adjoint();
    return uqw_first_return_term(coin, psi, k) -
           oqw_first_return_term(coin, rho, k);
  }
  std::vector<Vector2> images(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i)
    images[i] = path_product(coin, paths[i]) * psi;
  double total = 0.0;
  for (std::size_t i = 0; i < images.size(); ++i)
    for (std::size_t j = i + 1; j < images.size(); ++j)
      total += 2.0 * images[i].dot(images[j]).real();
  return total;
}

std::vector<FirstReturnRow> cumulative_return(const CoinPair& coin,
                                              const Vector2& psi, int k_max) {
  require_unitary_sum(coin);
  const Matrix2 rho = psi * psi.adjoint();
  std::vector<FirstReturnRow> rows;
  rows.reserve(k_max);
  double cum_o = 0.0, cum_u = 0.0, cum_a = 0.0;
  for (int k = 1; k <= k_max; ++k) {
    FirstReturnRow row;
    row.steps = 2 * k;
    row.oqw_term = oqw_first_return_term(coin, rho, k);
    row.uqw_term = uqw_first_return_term(coin, psi, k);
    row.interference = interference_term(coin, psi, k);
    cum_o += row.oqw_term;
    cum_u += row.uqw_term;
    cum_a += row.interference;
    row.oqw_cumulative = cum_o;
    row.uqw_cumulative = cum_u;
    row.interference_cumulative = cum_a;
    rows.push_back(row);
  }
  return rows;
}

ReturnSeries cumulative_return(const CoinPair& coin, const Matrix2& rho,
                               int k_max) {
  ReturnSeries series;
  series.kind = SeriesKind::OqwMonitored;
  series.terms.assign(2 * k_max, 0.0);
  for (int k = 1; k <= k_max; ++k)
    series.terms[2 * k - 1] = oqw_first_return_term(coin, rho, k);
  series.finalize();
  return series;
}

}  // namespace qwalk
