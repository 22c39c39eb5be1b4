#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "qwalk/io.hpp"
#include "qwalk/kac.hpp"
#include "qwalk/walkmodel.hpp"

using namespace qwalk;

namespace {

MatrixX e11() {
  MatrixX m = MatrixX::Zero(2, 2);
  m(0, 0) = 1;
  return m;
}

// Random walk spec: for every source site, a random isometry into the
// blocks of 2 or 3 target sites.
SiteWalkSpec random_spec(testing::Rng& rng, int sites, int dim) {
  SiteWalkSpec spec;
  spec.sites = sites;
  spec.dim = dim;
  for (int from = 0; from < sites; ++from) {
    const int fan_out = 2 + static_cast<int>(rng.uniform() * 2);
    std::vector<int> targets;
    for (int t = 0; t < fan_out; ++t)
      targets.push_back(static_cast<int>(rng.uniform() * sites) % sites);
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    // QR of a random tall matrix gives an isometry; its row blocks are the
    // per-edge effects.
    MatrixX tall(dim * targets.size(), dim);
    for (Eigen::Index i = 0; i < tall.rows(); ++i)
      for (Eigen::Index j = 0; j < tall.cols(); ++j)
        tall(i, j) = rng.complex_normal();
    Eigen::HouseholderQR<MatrixX> qr(tall);
    const MatrixX q = qr.householderQ() * MatrixX::Identity(tall.rows(), dim);
    for (std::size_t t = 0; t < targets.size(); ++t)
      spec.transitions[{from, targets[t]}] = q.block(t * dim, 0, dim, dim);
  }
  return spec;
}

// Classical mean return time to `origin` by first-step analysis: solves the
// hitting-time system h_i = 1 + sum_j P(i, j) h_j, h_origin = 0.
double classical_mean_return(const Eigen::MatrixXd& transition, int origin) {
  const int n = static_cast<int>(transition.rows());
  Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Ones(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j == origin) continue;
      system(i, j) -= transition(i, j);
    }
  }
  const Eigen::VectorXd hitting = system.partialPivLu().solve(rhs);
  return hitting(origin);
}

}  // namespace

TEST_SUITE_BEGIN("kac");

TEST_CASE("validation") {
  SUBCASE("barrier preset is well formed") {
    CHECK_NOTHROW(validate_site_walk(barrier_spec(1.0 / 3, 1.0 / 3, 10)));
  }
  SUBCASE("two-site swap is well formed") {
    CHECK_NOTHROW(validate_site_walk(two_site_swap()));
  }
  SUBCASE("overweight columns are rejected") {
    SiteWalkSpec spec = two_site_swap();
    spec.transitions[{0, 0}] = MatrixX::Identity(2, 2);
    CHECK_THROWS_AS(validate_site_walk(spec), Error);
    try {
      validate_site_walk(spec);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ColumnNotNormalized);
    }
  }
}

TEST_CASE("general step") {
  SUBCASE("identity edge moves a block unchanged") {
    SiteWalkSpec spec;
    spec.sites = 2;
    spec.dim = 2;
    spec.transitions[{0, 1}] = MatrixX::Identity(2, 2);
    spec.transitions[{1, 1}] = MatrixX::Identity(2, 2);
    validate_site_walk(spec);
    testing::Rng rng(71);
    const Matrix2 rho = rng.density2();
    BlockState blocks(2, MatrixX::Zero(2, 2));
    blocks[0] = rho;
    blocks = general_oqw_step(spec, blocks);
    CHECK(max_abs(blocks[1] - MatrixX(rho)) < 1e-15);
    CHECK(max_abs(blocks[0]) == 0.0);
  }
  SUBCASE("two-site swap exchanges blocks") {
    const SiteWalkSpec spec = two_site_swap();
    testing::Rng rng(72);
    BlockState blocks{MatrixX(rng.density2()), MatrixX::Zero(2, 2)};
    const BlockState swapped = general_oqw_step(spec, blocks);
    CHECK(max_abs(swapped[1] - blocks[0]) == 0.0);
    CHECK(max_abs(swapped[0]) == 0.0);
  }
  SUBCASE("homogeneous interior matches the line walk") {
    testing::Rng rng(73);
    const CoinPair coin = rng.trace_preserving_pair();
    // Segment of 11 sites with reflecting identity columns at the ends.
    SiteWalkSpec spec;
    spec.sites = 11;
    spec.dim = 2;
    spec.transitions[{0, 1}] = MatrixX::Identity(2, 2);
    spec.transitions[{10, 9}] = MatrixX::Identity(2, 2);
    for (int i = 1; i < 10; ++i) {
      spec.transitions[{i, i - 1}] = MatrixX(coin.left);
      spec.transitions[{i, i + 1}] = MatrixX(coin.right);
    }
    validate_site_walk(spec);

    const Matrix2 rho = rng.density2();
    BlockState blocks(11, MatrixX::Zero(2, 2));
    blocks[5] = rho;
    LatticeDensity line = LatticeDensity::point(0, rho);
    for (int n = 0; n < 4; ++n) {
      blocks = general_oqw_step(spec, blocks);
      line = oqw_step(line, coin);
      for (int offset = -4; offset <= 4; ++offset)
        CHECK(max_abs(blocks[5 + offset] - MatrixX(line.block(offset))) <
              1e-13);
    }
  }
  SUBCASE("trace and positivity preserved on random specs") {
    testing::Rng rng(74);
    for (int trial = 0; trial < 10; ++trial) {
      SiteWalkSpec spec = random_spec(rng, 4, 2);
      validate_site_walk(spec);
      BlockState blocks(4, MatrixX::Zero(2, 2));
      blocks[0] = rng.density2();
      for (int n = 0; n < 5; ++n) blocks = general_oqw_step(spec, blocks);
      CHECK(total_trace(blocks) == doctest::Approx(1.0).epsilon(1e-12));
      for (const MatrixX& block : blocks) {
        const MatrixX sym = 0.5 * (block + block.adjoint());
        Eigen::SelfAdjointEigenSolver<MatrixX> eigs(sym);
        CHECK(eigs.eigenvalues().minCoeff() >= -1e-12);
      }
    }
  }
}

TEST_CASE("stationary states") {
  SUBCASE("barrier profile is geometric") {
    const StationaryState pi = stationary_state(barrier_spec(1.0 / 3, 1.0 / 3, 60));
    CHECK(pi.residual < 1e-9);
    CHECK(pi.site_marginal_unique);
    // Internal degeneracy: any internal state on the unique site profile.
    CHECK(pi.eigenvalue_one_multiplicity > 1);
    CHECK_FALSE(pi.unique);
    const double alpha = 0.5;
    for (int j = 0; j < 20; ++j) {
      const double expected = std::pow(alpha, j) * (1 - alpha);
      CHECK(pi.blocks[j].trace().real() ==
            doctest::Approx(expected).epsilon(1e-8));
    }
  }
  SUBCASE("swap walk with scalar blocks is uniform") {
    const StationaryState pi = stationary_state(two_site_swap(1));
    CHECK(pi.blocks[0](0, 0).real() == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(pi.blocks[1](0, 0).real() == doctest::Approx(0.5).epsilon(1e-10));
  }
  SUBCASE("classical three-cycle is uniform") {
    SiteWalkSpec spec;
    spec.sites = 3;
    spec.dim = 1;
    for (int i = 0; i < 3; ++i)
      spec.transitions[{i, (i + 1) % 3}] = MatrixX::Identity(1, 1);
    const StationaryState pi = stationary_state(spec);
    for (int i = 0; i < 3; ++i)
      CHECK(pi.blocks[i](0, 0).real() ==
            doctest::Approx(1.0 / 3).epsilon(1e-9));
  }
}

TEST_CASE("first passage accumulation") {
  SUBCASE("barrier from the origin returns completely as E11") {
    const SiteWalkSpec spec = barrier_spec(1.0 / 3, 1.0 / 3, 60);
    const FirstPassageAccumulator acc =
        first_passage_accumulate(spec, e11(), 0, 4000);
    CHECK(acc.sums[0].trace().real() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(max_abs(acc.sums[0] - e11()) < 1e-6);
    CHECK(acc.tail_mass < 1e-12);
  }
  SUBCASE("swap walk returns in two steps") {
    const SiteWalkSpec spec = two_site_swap();
    const FirstPassageAccumulator acc =
        first_passage_accumulate(spec, e11(), 0, 10);
    CHECK(acc.sums[1].trace().real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(acc.sums[0].trace().real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(acc.tail_mass == 0.0);
  }
  SUBCASE("accumulated origin mass is monotone in the horizon") {
    const SiteWalkSpec spec = barrier_spec(1.0 / 3, 1.0 / 3, 20);
    double previous = 0.0;
    for (int horizon : {10, 50, 100, 400}) {
      const FirstPassageAccumulator acc =
          first_passage_accumulate(spec, e11(), 0, horizon);
      const double returned = acc.sums[0].trace().real();
      CHECK(returned >= previous);
      CHECK(returned <= 1.0 + 1e-10);
      previous = returned;
    }
  }
}

TEST_CASE("expected return times") {
  SUBCASE("barrier values at the acceptance settings") {
    const SiteWalkSpec spec = barrier_spec(1.0 / 3, 1.0 / 3, 60);
    const FirstPassageAccumulator from0 =
        first_passage_accumulate(spec, e11(), 0, 4000);
    CHECK(expected_return_time(from0) == doctest::Approx(2.0).epsilon(1e-6));
    const FirstPassageAccumulator from2 =
        first_passage_accumulate(spec, e11(), 2, 4000);
    CHECK(expected_return_time(from2) == doctest::Approx(8.0).epsilon(1e-5));
  }
  SUBCASE("swap walk returns in exactly two steps") {
    const FirstPassageAccumulator acc =
        first_passage_accumulate(two_site_swap(), e11(), 0, 10);
    CHECK(expected_return_time(acc) == doctest::Approx(2.0).epsilon(1e-14));
  }
  SUBCASE("short horizons leave too much tail") {
    const SiteWalkSpec spec = barrier_spec(1.0 / 3, 1.0 / 3, 60);
    const FirstPassageAccumulator acc =
        first_passage_accumulate(spec, e11(), 2, 3);
    CHECK_THROWS_AS(expected_return_time(acc), Error);
  }
}

TEST_CASE("return-time identity") {
  SUBCASE("barrier preset") {
    const SiteWalkSpec spec = barrier_spec(1.0 / 3, 1.0 / 3, 60);
    const KacReport report = kac_identity_check(spec, e11(), 0, 4000);
    CHECK(report.expected_return == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(report.relative_gap < 1e-5);
    CHECK(report.tail_mass < 1e-9);
  }
  SUBCASE("swap walk") {
    const KacReport report =
        kac_identity_check(two_site_swap(), e11(), 0, 16);
    CHECK(report.expected_return == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(report.stationary_trace == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(report.relative_gap < 1e-9);
  }
  SUBCASE("classical birth-death chain against the hitting-time oracle") {
    // Scalar-block walk: moves are sqrt of the classical probabilities.
    const int sites = 6;
    Eigen::MatrixXd transition = Eigen::MatrixXd::Zero(sites, sites);
    SiteWalkSpec spec;
    spec.sites = sites;
    spec.dim = 1;
    const double p = 0.4;
    const auto edge = [&](int from, int to, double probability) {
      spec.transitions[{from, to}] =
          std::sqrt(probability) * MatrixX::Identity(1, 1);
      transition(from, to) = probability;
    };
    edge(0, 0, 1 - p);
    edge(0, 1, p);
    for (int i = 1; i < sites - 1; ++i) {
      edge(i, i - 1, 1 - p);
      edge(i, i + 1, p);
    }
    edge(sites - 1, sites - 2, 1.0);
    validate_site_walk(spec);

    for (int origin : {0, 2}) {
      const KacReport report = kac_identity_check(
          spec, MatrixX::Identity(1, 1), origin, 3000);
      const double oracle = classical_mean_return(transition, origin);
      CHECK(report.expected_return == doctest::Approx(oracle).epsilon(1e-8));
      CHECK(report.relative_gap < 1e-8);
    }
  }
  SUBCASE("scaled first-passage sums are stationary") {
    const SiteWalkSpec spec = barrier_spec(1.0 / 3, 1.0 / 3, 40);
    const FirstPassageAccumulator acc =
        first_passage_accumulate(spec, e11(), 0, 2000);
    const double expected_return = expected_return_time(acc);
    BlockState scaled(acc.sums);
    for (MatrixX& block : scaled) block /= expected_return;
    const BlockState stepped = general_oqw_step(spec, scaled);
    double worst = 0.0;
    for (int i = 0; i < spec.sites; ++i)
      worst = std::max(worst, max_abs(stepped[i] - scaled[i]));
    CHECK(worst < 1e-6);
  }
  SUBCASE("distinct site profiles are refused") {
    // Two disconnected swap pairs: the fixed space mixes two unrelated
    // profiles, so the identity has no single right-hand side.
    SiteWalkSpec spec;
    spec.sites = 4;
    spec.dim = 1;
    spec.transitions[{0, 1}] = MatrixX::Identity(1, 1);
    spec.transitions[{1, 0}] = MatrixX::Identity(1, 1);
    spec.transitions[{2, 3}] = MatrixX::Identity(1, 1);
    spec.transitions[{3, 2}] = MatrixX::Identity(1, 1);
    validate_site_walk(spec);
    CHECK_THROWS_AS(
        kac_identity_check(spec, MatrixX::Identity(1, 1), 0, 50), Error);
  }
}

TEST_CASE("graph trajectories") {
  SUBCASE("swap walk alternates deterministically") {
    const GraphTrajectory trajectory =
        sample_trajectory(two_site_swap(), e11(), 0, 9, 3);
    for (std::size_t n = 0; n < trajectory.positions.size(); ++n)
      CHECK(trajectory.positions[n] == static_cast<int>(n % 2));
    REQUIRE(trajectory.first_return_step.has_value());
    CHECK(*trajectory.first_return_step == 2);
  }
  SUBCASE("barrier trajectories stay on the half line and renormalize") {
    const SiteWalkSpec spec = barrier_spec(1.0 / 3, 0.25, 12);
    const GraphTrajectory trajectory =
        sample_trajectory(spec, MatrixX::Identity(2, 2), 0, 400, 17);
    for (int position : trajectory.positions) {
      CHECK(position >= 0);
      CHECK(position <= 12);
    }
    for (const MatrixX& rho : trajectory.densities)
      CHECK(rho.trace().real() == doctest::Approx(1.0).epsilon(1e-10));
    // Left-biased walk from the barrier returns quickly.
    REQUIRE(trajectory.first_return_step.has_value());
  }
  SUBCASE("same seed, same path") {
    const SiteWalkSpec spec = barrier_spec(1.0 / 3, 1.0 / 3, 8);
    const auto a = sample_trajectory(spec, e11(), 2, 64, 5);
    const auto b = sample_trajectory(spec, e11(), 2, 64, 5);
    CHECK(a.positions == b.positions);
  }
}

TEST_CASE("walk specs round-trip through json") {
  const SiteWalkSpec spec = barrier_spec(1.0 / 3, 0.25, 8);
  const SiteWalkSpec parsed = site_walk_from_json(site_walk_to_json(spec));
  CHECK(parsed.sites == spec.sites);
  CHECK(parsed.dim == spec.dim);
  REQUIRE(parsed.transitions.size() == spec.transitions.size());
  for (const auto& [edge, matrix] : spec.transitions)
    CHECK(max_abs(parsed.transitions.at(edge) - matrix) == 0.0);
}

TEST_SUITE_END();
