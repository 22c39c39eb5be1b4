#include "qwalk/walkmodel.hpp"

#include <cmath>
#include <random>

namespace qwalk {

namespace {

constexpr double kNormalTol = 1e-10;

bool is_identity(const Matrix2& m, double tol) {
  return max_abs(m - Matrix2::Identity()) < tol;
}

}  // namespace

bool is_pq_matrix(const Matrix2& m, double tol) {
  const double off_diag = std::max(std::abs(m(0, 1)), std::abs(m(1, 0)));
  const double on_diag = std::max(std::abs(m(0, 0)), std::abs(m(1, 1)));
  return off_diag < tol || on_diag < tol;
}

CoinPair validate_coin_pair(const Matrix2& left, const Matrix2& right) {
  CoinPair coin;
  coin.left = left;
  coin.right = right;
  coin.trace_preserving =
      is_identity(left.adjoint() * left + right.adjoint() * right, kExactTol);
  coin.unital =
      is_identity(left * left.adjoint() + right * right.adjoint(), kExactTol);
  const Matrix2 sum = left + right;
  coin.unitary_sum = is_identity(sum.adjoint() * sum, kExactTol);
  coin.left_normal =
      max_abs(left.adjoint() * left - left * left.adjoint()) < kNormalTol;
  coin.right_normal =
      max_abs(right.adjoint() * right - right * right.adjoint()) < kNormalTol;
  coin.is_pq = is_pq_matrix(left) && is_pq_matrix(right);
  if (!coin.trace_preserving)
    throw Error(ErrorCode::NotTracePreserving,
                "coin pair does not satisfy L^*L + R^*R = I");
  return coin;
}

LatticeDensity LatticeDensity::point(int site, const Matrix2& density) {
  LatticeDensity state;
  state.lo = site;
  state.blocks.push_back(density);
  return state;
}

const Matrix2& LatticeDensity::block(int site) const {
  static const Matrix2 zero = Matrix2::Zero();
  return contains(site) ? blocks[site - lo] : zero;
}

double LatticeDensity::total_trace() const {
  double total = 0.0;
  for (const Matrix2& b : blocks) total += b.trace().real();
  return total;
}

SpinorField SpinorField::point(int site, const Vector2& spinor) {
  SpinorField state;
  state.lo = site;
  state.amplitudes.push_back(spinor);
  return state;
}

const Vector2& SpinorField::amplitude(int site) const {
  static const Vector2 zero = Vector2::Zero();
  return contains(site) ? amplitudes[site - lo] : zero;
}

double SpinorField::total_norm2() const {
  double total = 0.0;
  for (const Vector2& a : amplitudes) total += a.squaredNorm();
  return total;
}

LatticeDensity oqw_step(const LatticeDensity& state, const CoinPair& coin) {
  LatticeDensity next;
  next.lo = state.lo - 1;
  const int n = static_cast<int>(state.blocks.size());
  next.blocks.assign(n + 2, Matrix2::Zero());
  for (int i = 0; i < n; ++i) {
    if (state.blocks[i].isZero(0.0)) continue;
    next.blocks[i] += coin.left * state.blocks[i] * coin.left.adjoint();
    next.blocks[i + 2] += coin.right * state.blocks[i] * coin.right.adjoint();
  }
  return next;
}

SpinorField uqw_step(const SpinorField& state, const CoinPair& coin) {
  if (!coin.unitary_sum)
    throw Error(ErrorCode::CoinNotUnitarySum,
                "unitary step requires L + R unitary");
  SpinorField next;
  next.lo = state.lo - 1;
  const int n = static_cast<int>(state.amplitudes.size());
  next.amplitudes.assign(n + 2, Vector2::Zero());
  for (int i = 0; i < n; ++i) {
    next.amplitudes[i] += coin.left * state.amplitudes[i];
    next.amplitudes[i + 2] += coin.right * state.amplitudes[i];
  }
  return next;
}

std::map<int, double> site_distribution(const LatticeDensity& state,
                                        const CoinPair& coin, int steps) {
  LatticeDensity current = state;
  for (int n = 0; n < steps; ++n) current = oqw_step(current, coin);
  std::map<int, double> dist;
  for (int site = current.lo; site <= current.hi(); ++site) {
    const double p = current.block(site).trace().real();
    if (p != 0.0) dist[site] = p;
  }
  return dist;
}

std::map<int, double> site_distribution(const SpinorField& state,
                                        const CoinPair& coin, int steps) {
  SpinorField current = state;
  for (int n = 0; n < steps; ++n) current = uqw_step(current, coin);
  std::map<int, double> dist;
  for (int site = current.lo; site <= current.hi(); ++site) {
    const double p = current.amplitude(site).squaredNorm();
    if (p != 0.0) dist[site] = p;
  }
  return dist;
}

TrajectorySample sample_trajectory(const CoinPair& coin, const Matrix2& rho0,
                                   int start, int horizon,
                                   std::uint64_t seed) {
  TrajectorySample sample;
  sample.seed = seed;
  sample.positions.reserve(horizon + 1);
  sample.densities.reserve(horizon + 1);
  sample.positions.push_back(start);
  Matrix2 rho = rho0 / rho0.trace().real();
  sample.densities.push_back(rho);

  std::mt19937_64 engine(seed);
  const auto uniform = [&engine]() {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
  };

  int position = start;
  for (int n = 1; n <= horizon; ++n) {
    const Matrix2 left_branch = coin.left * rho * coin.left.adjoint();
    const Matrix2 right_branch = coin.right * rho * coin.right.adjoint();
    const double p_left = left_branch.trace().real();
    const double p_right = right_branch.trace().real();
    if (p_left < 1e-15 && p_right < 1e-15)
      throw Error(ErrorCode::DegenerateStep,
                  "both step probabilities vanish; state is numerically dead");
    const bool go_left = uniform() * (p_left + p_right) < p_left;
    if (go_left) {
      position -= 1;
      rho = left_branch / p_left;
    } else {
      position += 1;
      rho = right_branch / p_right;
    }
    sample.positions.push_back(position);
    sample.densities.push_back(rho);
    if (!sample.first_return_step && position == start)
      sample.first_return_step = n;
  }
  return sample;
}

Matrix2 hadamard_right() {
  Matrix2 m;
  m << 1, 1, 0, 0;
  return m / std::sqrt(2.0);
}

Matrix2 hadamard_left() {
  Matrix2 m;
  m << 0, 0, 1, -1;
  return m / std::sqrt(2.0);
}

Matrix2 bitflip_left(double p) { return std::sqrt(p) * Matrix2::Identity(); }

Matrix2 bitflip_right(double p) {
  Matrix2 x;
  x << 0, 1, 1, 0;
  return std::sqrt(1.0 - p) * x;
}

Matrix2 nonnormal_left() {
  Matrix2 m;
  m << 1, 1, 0, 1;
  return m / std::sqrt(3.0);
}

Matrix2 nonnormal_right() {
  Matrix2 m;
  m << 1, 0, -1, 1;
  return m / std::sqrt(3.0);
}

Matrix2 diag_trichotomy_left() {
  Matrix2 m = Matrix2::Zero();
  m(0, 0) = 1.0 / std::sqrt(2.0);
  m(1, 1) = 1.0 / std::sqrt(3.0);
  return m;
}

Matrix2 diag_trichotomy_right() {
  Matrix2 m = Matrix2::Zero();
  m(0, 0) = 1.0 / std::sqrt(2.0);
  m(1, 1) = std::sqrt(2.0) / std::sqrt(3.0);
  return m;
}

CoinPair preset_coin(const std::string& name, double p) {
  if (name == "hadamard")
    return validate_coin_pair(hadamard_left(), hadamard_right());
  if (name == "bitflip") {
    if (!(p > 0.0 && p < 1.0))
      throw Error(ErrorCode::InvalidArgument,
                  "bitflip preset requires p in (0, 1)");
    return validate_coin_pair(bitflip_left(p), bitflip_right(p));
  }
  if (name == "nonnormal" || name == "sec7")
    return validate_coin_pair(nonnormal_left(), nonnormal_right());
  if (name == "diag-trichotomy")
    return validate_coin_pair(diag_trichotomy_left(), diag_trichotomy_right());
  throw Error(ErrorCode::InvalidArgument, "unknown preset: " + name);
}

std::vector<std::string> preset_coin_names() {
  return {"hadamard", "bitflip", "nonnormal", "diag-trichotomy"};
}

}  // namespace qwalk
