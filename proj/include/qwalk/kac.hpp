#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "qwalk/matkernel.hpp"

namespace qwalk {

// Open walk on a finite ordered set of sites with internal dimension d.
// transitions[(from, to)] holds the effect matrix of the move; for every
// source the adjoint-square column sum must be the identity.
struct SiteWalkSpec {
  int sites = 0;
  int dim = 0;
  std::map<std::pair<int, int>, MatrixX> transitions;
};

// Checks the column normalization sum_to B^* B = I for every source site.
// Throws ColumnNotNormalized naming the offending column.
const SiteWalkSpec& validate_site_walk(const SiteWalkSpec& spec);

using BlockState = std::vector<MatrixX>;

BlockState uniform_block_state(const SiteWalkSpec& spec);

// One channel step: block'(i) = sum_j B(j->i) block(j) B(j->i)^*.
BlockState general_oqw_step(const SiteWalkSpec& spec, const BlockState& blocks);

double total_trace(const BlockState& blocks);

// Full matrix of the channel acting on stacked vec'd blocks (k d^2 square).
MatrixX full_channel_matrix(const SiteWalkSpec& spec);

struct StationaryState {
  BlockState blocks;
  double residual = 0.0;
  int eigenvalue_one_multiplicity = 0;
  bool unique = false;                // multiplicity exactly one
  bool site_marginal_unique = false;  // all fixed states share one trace profile
};

// Damped power iteration from the maximally mixed block state. Throws
// NotConverged (with the residual in the message) if the tolerance is not
// met within max_iterations.
StationaryState stationary_state(const SiteWalkSpec& spec, double tol = 1e-10,
                                 int max_iterations = 200000);

// Taboo accumulation of first-passage mass: the walk starts at rho at site
// origin; mass arriving back at the origin is recorded into sums[origin] and
// removed, mass passing through j is accumulated into sums[j] each step.
struct FirstPassageAccumulator {
  int origin = 0;
  int horizon = 0;
  BlockState sums;
  double tail_mass = 0.0;
};

FirstPassageAccumulator first_passage_accumulate(const SiteWalkSpec& spec,
                                                 const MatrixX& rho, int origin,
                                                 int horizon);

// Expected return time sum_j tr(sums[j]); requires the un-returned tail mass
// below tail_epsilon (TailTooLarge otherwise).
double expected_return_time(const FirstPassageAccumulator& accumulator,
                            double tail_epsilon = 1e-6);

struct KacReport {
  double expected_return = 0.0;
  double stationary_trace = 0.0;          // tr(pi(x))
  double inverse_stationary_trace = 0.0;  // 1 / tr(pi(x))
  double relative_gap = 0.0;              // |E_R tr(pi(x)) - 1|
  double tail_mass = 0.0;
  double stationary_residual = 0.0;
};

// Computes both sides of E_R = 1 / tr(pi(x)) independently. Requires a
// unique site-trace profile among the fixed states of the channel (throws
// NonUnique otherwise; internal-state degeneracy alone is tolerated).
KacReport kac_identity_check(const SiteWalkSpec& spec, const MatrixX& rho,
                             int origin, int horizon);

// Sampled quantum trajectory over a finite walk spec, reproducible from the
// seed (std::mt19937_64; uniforms from the top 53 bits).
struct GraphTrajectory {
  std::uint64_t seed = 0;
  std::vector<int> positions;
  std::vector<MatrixX> densities;  // normalized at each step
  std::optional<int> first_return_step;
};

GraphTrajectory sample_trajectory(const SiteWalkSpec& spec, const MatrixX& rho,
                                  int start, int horizon, std::uint64_t seed);

// Half-line walk with a retaining barrier at 0, truncated at site M with a
// reflecting column. From the barrier the walker stays with weight sqrt(q)
// and moves right with weight sqrt(p), so the site-trace profile is
// alpha^j (1 - alpha) with alpha = p/q, up to a truncation tail.
SiteWalkSpec barrier_spec(double p11, double p22, int truncation);

// Two sites exchanging their blocks through identity effects.
SiteWalkSpec two_site_swap(int dim = 2);

}  // namespace qwalk
