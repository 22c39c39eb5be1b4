#include "qwalk/kac.hpp"

#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace qwalk {

namespace {

double max_block_abs(const BlockState& a, const BlockState& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, max_abs(a[i] - b[i]));
  return worst;
}

}  // namespace

const SiteWalkSpec& validate_site_walk(const SiteWalkSpec& spec) {
  if (spec.sites < 1 || spec.dim < 1)
    throw Error(ErrorCode::InvalidArgument, "walk needs sites >= 1, dim >= 1");
  for (const auto& [edge, matrix] : spec.transitions) {
    const auto& [from, to] = edge;
    if (from < 0 || from >= spec.sites || to < 0 || to >= spec.sites)
      throw Error(ErrorCode::InvalidArgument, "transition endpoint out of range");
    if (matrix.rows() != spec.dim || matrix.cols() != spec.dim)
      throw Error(ErrorCode::InvalidArgument, "transition matrix has wrong size");
  }
  for (int from = 0; from < spec.sites; ++from) {
    MatrixX column_sum = MatrixX::Zero(spec.dim, spec.dim);
    for (const auto& [edge, matrix] : spec.transitions)
      if (edge.first == from) column_sum += matrix.adjoint() * matrix;
    if (max_abs(column_sum - MatrixX::Identity(spec.dim, spec.dim)) >= kExactTol)
      throw Error(ErrorCode::ColumnNotNormalized,
                  "column " + std::to_string(from) +
                      " does not satisfy sum B^*B = I");
  }
  return spec;
}

BlockState uniform_block_state(const SiteWalkSpec& spec) {
  return BlockState(spec.sites, MatrixX::Identity(spec.dim, spec.dim) /
                                    static_cast<double>(spec.sites * spec.dim));
}

BlockState general_oqw_step(const SiteWalkSpec& spec, const BlockState& blocks) {
  BlockState next(spec.sites, MatrixX::Zero(spec.dim, spec.dim));
  for (const auto& [edge, matrix] : spec.transitions) {
    const auto& [from, to] = edge;
    if (!blocks[from].isZero(0.0))
      next[to] += matrix * blocks[from] * matrix.adjoint();
  }
  return next;
}

double total_trace(const BlockState& blocks) {
  double total = 0.0;
  for (const MatrixX& block : blocks) total += block.trace().real();
  return total;
}

MatrixX full_channel_matrix(const SiteWalkSpec& spec) {
  const int d2 = spec.dim * spec.dim;
  MatrixX out = MatrixX::Zero(spec.sites * d2, spec.sites * d2);
  for (const auto& [edge, matrix] : spec.transitions) {
    const auto& [from, to] = edge;
    out.block(to * d2, from * d2, d2, d2) += kron(matrix, matrix.conjugate());
  }
  return out;
}

namespace {

// Fixed states of the channel: eigenvalue-one multiplicity and whether all
// fixed vectors share a single site-trace profile (up to scale).
void analyze_fixed_space(const SiteWalkSpec& spec, StationaryState& state) {
  const MatrixX channel = full_channel_matrix(spec);
  Eigen::ComplexEigenSolver<MatrixX> solver(channel, true);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::EigenFailure, "channel eigendecomposition failed");

  const int d2 = spec.dim * spec.dim;
  std::vector<VectorX> trace_profiles;
  int multiplicity = 0;
  for (Eigen::Index j = 0; j < solver.eigenvalues().size(); ++j) {
    if (std::abs(solver.eigenvalues()(j) - 1.0) >= 1e-8) continue;
    ++multiplicity;
    const VectorX v = solver.eigenvectors().col(j);
    VectorX profile(spec.sites);
    for (int i = 0; i < spec.sites; ++i)
      profile(i) = unvec(v.segment(i * d2, d2), spec.dim).trace();
    trace_profiles.push_back(profile);
  }
  state.eigenvalue_one_multiplicity = multiplicity;
  state.unique = multiplicity == 1;
  if (multiplicity == 0) {
    state.site_marginal_unique = false;
    return;
  }

  MatrixX stacked(trace_profiles.size(), spec.sites);
  for (std::size_t r = 0; r < trace_profiles.size(); ++r)
    stacked.row(r) = trace_profiles[r].transpose();
  Eigen::JacobiSVD<MatrixX> svd(stacked);
  int rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 1e-6 * svd.singularValues()(0)) ++rank;
  state.site_marginal_unique = rank <= 1;
}

}  // namespace

StationaryState stationary_state(const SiteWalkSpec& spec, double tol,
                                 int max_iterations) {
  validate_site_walk(spec);
  StationaryState state;
  state.blocks = uniform_block_state(spec);
  double residual = std::numeric_limits<double>::infinity();
  for (int iteration = 0; iteration < max_iterations; ++iteration) {
    BlockState next = general_oqw_step(spec, state.blocks);
    residual = max_block_abs(next, state.blocks);
    // Damped update: averages out period-two oscillation of the channel.
    for (int i = 0; i < spec.sites; ++i)
      next[i] = 0.5 * (next[i] + state.blocks[i]);
    const double trace = total_trace(next);
    for (MatrixX& block : next) block /= trace;
    state.blocks = std::move(next);
    if (residual < tol) break;
  }
  if (residual >= tol)
    throw Error(ErrorCode::NotConverged,
                "power iteration residual " + std::to_string(residual) +
                    " above tolerance");
  state.residual = max_block_abs(general_oqw_step(spec, state.blocks),
                                 state.blocks);
  analyze_fixed_space(spec, state);
  return state;
}

FirstPassageAccumulator first_passage_accumulate(const SiteWalkSpec& spec,
                                                 const MatrixX& rho, int origin,
                                                 int horizon) {
  validate_site_walk(spec);
  if (origin < 0 || origin >= spec.sites)
    throw Error(ErrorCode::InvalidArgument, "origin outside the site set");
  FirstPassageAccumulator accumulator;
  accumulator.origin = origin;
  accumulator.horizon = horizon;
  accumulator.sums.assign(spec.sites, MatrixX::Zero(spec.dim, spec.dim));

  BlockState blocks(spec.sites, MatrixX::Zero(spec.dim, spec.dim));
  blocks[origin] = rho / rho.trace().real();
  for (int n = 1; n <= horizon; ++n) {
    blocks = general_oqw_step(spec, blocks);
    for (int i = 0; i < spec.sites; ++i) accumulator.sums[i] += blocks[i];
    blocks[origin].setZero();
  }
  accumulator.tail_mass = total_trace(blocks);
  return accumulator;
}

double expected_return_time(const FirstPassageAccumulator& accumulator,
                            double tail_epsilon) {
  if (accumulator.tail_mass >= tail_epsilon)
    throw Error(ErrorCode::TailTooLarge,
                "un-returned mass " + std::to_string(accumulator.tail_mass) +
                    " at the horizon; walk is not numerically positive "
                    "recurrent at this truncation");
  return total_trace(accumulator.sums);
}

KacReport kac_identity_check(const SiteWalkSpec& spec, const MatrixX& rho,
                             int origin, int horizon) {
  const StationaryState stationary = stationary_state(spec);
  if (!stationary.site_marginal_unique)
    throw Error(ErrorCode::NonUnique,
                "fixed states of the channel carry distinct site profiles; "
                "the return-time identity needs a single one");
  const FirstPassageAccumulator accumulator =
      first_passage_accumulate(spec, rho, origin, horizon);

  KacReport report;
  report.expected_return = expected_return_time(accumulator);
  report.stationary_trace = stationary.blocks[origin].trace().real();
  report.inverse_stationary_trace = 1.0 / report.stationary_trace;
  report.relative_gap =
      std::abs(report.expected_return * report.stationary_trace - 1.0);
  report.tail_mass = accumulator.tail_mass;
  report.stationary_residual = stationary.residual;
  return report;
}

GraphTrajectory sample_trajectory(const SiteWalkSpec& spec, const MatrixX& rho,
                                  int start, int horizon, std::uint64_t seed) {
  validate_site_walk(spec);
  if (start < 0 || start >= spec.sites)
    throw Error(ErrorCode::InvalidArgument, "start outside the site set");
  GraphTrajectory trajectory;
  trajectory.seed = seed;
  trajectory.positions.push_back(start);
  MatrixX state = rho / rho.trace().real();
  trajectory.densities.push_back(state);

  std::mt19937_64 engine(seed);
  const auto uniform = [&engine]() {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
  };

  int position = start;
  for (int n = 1; n <= horizon; ++n) {
    std::vector<std::pair<int, MatrixX>> branches;
    double total = 0.0;
    for (const auto& [edge, matrix] : spec.transitions) {
      if (edge.first != position) continue;
      MatrixX branch = matrix * state * matrix.adjoint();
      total += branch.trace().real();
      branches.emplace_back(edge.second, std::move(branch));
    }
    if (total < 1e-15)
      throw Error(ErrorCode::DegenerateStep,
                  "no outgoing probability; state is numerically dead");
    double draw = uniform() * total;
    std::size_t chosen = 0;
    for (; chosen + 1 < branches.size(); ++chosen) {
      draw -= branches[chosen].second.trace().real();
      if (draw < 0.0) break;
    }
    position = branches[chosen].first;
    state = branches[chosen].second /
            branches[chosen].second.trace().real();
    trajectory.positions.push_back(position);
    trajectory.densities.push_back(state);
    if (!trajectory.first_return_step && position == start)
      trajectory.first_return_step = n;
  }
  return trajectory;
}

SiteWalkSpec barrier_spec(double p11, double p22, int truncation) {
  if (!(p11 > 0.0 && p11 < 1.0 && p22 > 0.0 && p22 < 1.0))
    throw Error(ErrorCode::InvalidArgument,
                "barrier weights must lie in (0, 1)");
  if (truncation < 2)
    throw Error(ErrorCode::InvalidArgument, "barrier needs truncation >= 2");
  SiteWalkSpec spec;
  spec.sites = truncation + 1;
  spec.dim = 2;
  MatrixX right(2, 2), left(2, 2);
  right << std::sqrt(p11), 0, 0, std::sqrt(p22);
  left << std::sqrt(1.0 - p11), 0, 0, std::sqrt(1.0 - p22);
  spec.transitions[{0, 0}] = left;  // retaining barrier: stay rather than exit
  spec.transitions[{0, 1}] = right;
  for (int i = 1; i < truncation; ++i) {
    spec.transitions[{i, i - 1}] = left;
    spec.transitions[{i, i + 1}] = right;
  }
  spec.transitions[{truncation, truncation - 1}] =
      MatrixX::Identity(2, 2);  // reflecting column closes the truncation
  return spec;
}

SiteWalkSpec two_site_swap(int dim) {
  SiteWalkSpec spec;
  spec.sites = 2;
  spec.dim = dim;
  spec.transitions[{0, 1}] = MatrixX::Identity(dim, dim);
  spec.transitions[{1, 0}] = MatrixX::Identity(dim, dim);
  return spec;
}

}  // namespace qwalk
