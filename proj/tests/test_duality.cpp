#include <doctest.h>

#include <cmath>

#include "seedscale/duality.hpp"
#include "seedscale/expm.hpp"
#include "seedscale/path.hpp"

using namespace seedscale;

TEST_CASE("integer powers use the 0^0 = 1 convention") {
  CHECK(ipow(0.0, 0) == 1.0);
  CHECK(ipow(0.0, 3) == 0.0);
  CHECK(ipow(0.5, 2) == doctest::Approx(0.25));
  CHECK_THROWS_AS(ipow(2.0, -1), std::invalid_argument);
}

TEST_CASE("moment grid validation") {
  MomentGrid grid;
  grid.pairs = {{1, 0}};
  grid.points = {{0.5, 0.5}};
  grid.times = {1.0};
  CHECK_NOTHROW(grid.validate());
  grid.pairs = {{5, 0}};
  CHECK_THROWS_AS(grid.validate(), std::invalid_argument);  // above cap
  grid.pairs = {{1, 0}};
  grid.points = {{1.5, 0.5}};
  CHECK_THROWS_AS(grid.validate(), std::invalid_argument);
  grid.points = {{0.5, 0.5}};
  grid.times = {1.0, 0.5};
  CHECK_THROWS_AS(grid.validate(), std::invalid_argument);
}

TEST_CASE("exact chain moments") {
  RateMatrix q = blockcounting_q({1.0, 1.0, {}}, {2, 1});
  TransitionMatrix pt = expm_conservative(q, 0.7);
  CHECK(chain_moment_exact(pt, {2, 1}, 1.0, 1.0) ==
        doctest::Approx(1.0).epsilon(1e-10));
  TransitionMatrix id = TransitionMatrix::identity(q.space());
  CHECK(chain_moment_exact(id, {2, 1}, 0.3, 0.9) ==
        doctest::Approx(0.09 * 0.9).epsilon(1e-12));
  // At (0,0) the moment is 1 for any (x,y), including x = y = 0.
  CHECK(chain_moment_exact(pt, {0, 0}, 0.0, 0.0) ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK_THROWS_AS(chain_moment_exact(pt, {7, 0}, 0.5, 0.5), std::out_of_range);
}

TEST_CASE("limit moments do not depend on the active count") {
  DegenerateSemigroup sg = DegenerateSemigroup::ancient({5, 0}, 1.0);
  TransitionMatrix pi = ancient_semigroup(sg, 0.8);
  const double reference = chain_moment_exact(pi, {1, 0}, 0.3, 0.9);
  for (int n = 2; n <= 5; ++n) {
    CHECK(std::abs(chain_moment_exact(pi, {n, 0}, 0.3, 0.9) - reference) <
          1e-12);
  }
  // Explicit two-entry form of the (n,0) moment on the limit chain.
  const double direct = 0.3 * pi.at({1, 0}, {1, 0}) + 0.9 * pi.at({1, 0}, {0, 1});
  CHECK(reference == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("diffusion moment MC with a two-state dual oracle") {
  auto constant = [](RngStream&) { return DiffusionState{1.0, 1.0}; };
  auto [one_mean, one_sigma] = diffusion_moment_mc(constant, 0, 0, 1000, 1);
  CHECK(one_mean == 1.0);
  CHECK(one_sigma == 0.0);
  CHECK_THROWS_AS(diffusion_moment_mc(constant, 1, 0, 50, 1),
                  std::invalid_argument);

  // The dual of the (1,0) moment is the two-state chain (1,0) <-> (0,1) with
  // rates c and cK; its exact moment is x p11(t) + y p12(t).
  const double c = 1.0, K = 1.0, t = 1.0, x = 0.3, y = 0.9;
  const double p_stay = (K + std::exp(-c * (1.0 + K) * t)) / (1.0 + K);
  const double oracle = x * p_stay + y * (1.0 - p_stay);
  EmConfig config;
  config.h = 1e-3;
  config.horizon = t;
  config.output_grid = {t};
  auto endpoint = [&](RngStream& rng) {
    return simulate_seedbank({x, y}, c, K, config, rng).states[0];
  };
  auto [mean, sigma] = diffusion_moment_mc(endpoint, 1, 0, 20000, 17);
  CHECK(std::abs(mean - oracle) < 3.0 * sigma + 5e-3);
}

TEST_CASE("rate perturbation keeps the generator conservative") {
  RateMatrix q = blockcounting_q({1.0, 1.0, {}}, {2, 1});
  RateMatrix perturbed = perturb_rate(q, {2, 1}, {1, 1}, 1.2);
  CHECK(perturbed.at({2, 1}, {1, 1}) == doctest::Approx(1.2 * q.at({2, 1}, {1, 1})));
  CHECK(perturbed.entries().row(
            static_cast<Eigen::Index>(q.space().index({2, 1}))).sum() ==
        doctest::Approx(0.0).epsilon(1e-14));
  CHECK_THROWS_AS(perturb_rate(q, {2, 1}, {2, 1}, 1.2), std::invalid_argument);
  CHECK_THROWS_AS(perturb_rate(q, {0, 0}, {1, 0}, 1.2), std::invalid_argument);
}

TEST_CASE("prelimit duality harness passes and detects corruption") {
  MomentGrid grid;
  grid.pairs = {{1, 0}, {0, 1}, {1, 1}, {2, 0}};
  grid.points = {{0.3, 0.9}, {1.0, 1.0}};
  grid.times = {0.5};
  RateMatrix q = blockcounting_q({1.0, 1.0, {}}, {2, 1});
  DualityReport report =
      verify_prelimit_duality(q, 1.0, 1.0, grid, 1e-3, 20000, 101);
  CHECK(report.all_pass);
  for (const auto& cell : report.cells) {
    if (cell.x == 1.0 && cell.y == 1.0) {
      CHECK(std::abs(cell.chain_exact - cell.diffusion_mc_mean) < 1e-9);
    }
  }

  // Corrupting the dormancy rate out of (1,0) shifts the (1,0) moment at an
  // asymmetric (x,y) well beyond the tolerance.
  RateMatrix corrupted = perturb_rate(q, {1, 0}, {0, 1}, 1.2);
  DualityReport failing =
      verify_prelimit_duality(corrupted, 1.0, 1.0, grid, 1e-3, 20000, 101);
  CHECK(!failing.all_pass);
}

TEST_CASE("limit duality harness and its input screening") {
  MomentGrid grid;
  grid.pairs = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  grid.points = {{0.0, 0.7}, {1.0, 0.3}};
  grid.times = {0.5, 2.0};
  DualityReport report = verify_limit_duality(1.0, grid, 20000, 55);
  CHECK(report.all_pass);
  CHECK(report.bias_allowance == 0.0);

  MomentGrid bad_point = grid;
  bad_point.points = {{0.5, 0.5}};
  CHECK_THROWS_AS(verify_limit_duality(1.0, bad_point, 1000, 1),
                  std::invalid_argument);
  MomentGrid bad_pair = grid;
  bad_pair.pairs = {{2, 0}};
  CHECK_THROWS_AS(verify_limit_duality(1.0, bad_pair, 1000, 1),
                  std::invalid_argument);
}

TEST_CASE("chain convergence report is exact and monotone") {
  ConvergenceReport report =
      chain_convergence_tv({0.2, 0.1, 0.05}, 1.0, {2, 1}, {1.0});
  CHECK(report.marginal_monotone);
  CHECK(report.two_time_monotone);
  CHECK(report.final_tv < 0.15);
  for (const auto& r : report.records) {
    CHECK(r.tv >= 0.0);
    CHECK(r.tv <= 1.0);
  }
  CHECK_THROWS_AS(chain_convergence_tv({0.8}, 1.0, {2, 1}, {1.0}),
                  std::invalid_argument);  // outside the asymptotic regime
  CHECK_THROWS_AS(chain_convergence_tv({0.05, 0.2}, 1.0, {2, 1}, {1.0}),
                  std::invalid_argument);
}

TEST_CASE("spark state is reachable only through (1,1)") {
  RateMatrix q = blockcounting_q({0.2, 1.0, {}}, {1, 1});
  const auto spark = q.space().index({2, 0});
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (i == spark) continue;
    if (q.space().state(i) == BlockState{1, 1}) {
      CHECK(q(i, spark) > 0.0);
    } else {
      CHECK(q(i, spark) == 0.0);
    }
  }
  // The limit chain puts no mass there at positive times.
  DegenerateSemigroup sg = DegenerateSemigroup::ancient({1, 1}, 1.0);
  for (double t : {1e-3, 0.1, 1.0}) {
    TransitionMatrix pi = ancient_semigroup(sg, t);
    for (std::size_t i = 0; i < pi.size(); ++i) {
      CHECK(std::abs(pi(i, spark)) < 1e-10);
    }
  }
}

TEST_CASE("spark occupation shrinks with c") {
  SparkReport coarse = spark_statistic(0.2, 1.0, 1.0, 3000, 7);
  SparkReport fine = spark_statistic(0.05, 1.0, 1.0, 3000, 7);
  CHECK(fine.occupation_fraction < coarse.occupation_fraction);
  CHECK(coarse.excursions_per_path > 0.0);
}

TEST_CASE("martingale conservation on both sides of the limit") {
  FixationReport limit = fixation_check_limit({0, 0.6}, 1.0, {0.5, 2.0}, 20000, 9);
  CHECK(limit.conserved_value == doctest::Approx(0.3));
  CHECK(limit.all_pass);

  FixationReport trivial = fixation_check_limit({1, 1.0}, 1.0, {1.0}, 500, 9);
  CHECK(trivial.conserved_value == doctest::Approx(1.0));
  CHECK(trivial.records[0].sigma == 0.0);
  CHECK(trivial.all_pass);

  FixationReport prelimit = fixation_check_prelimit({0.5, 0.5}, 1.0, 1.0,
                                                    {0.5, 1.0}, 1e-3, 10000, 13);
  CHECK(prelimit.conserved_value == doctest::Approx(0.5));
  CHECK(prelimit.all_pass);
}
