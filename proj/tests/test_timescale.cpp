#include <doctest.h>

#include <cmath>

#include "seedscale/seedbank.hpp"
#include "seedscale/timescale.hpp"
#include "seedscale/tolerances.hpp"

using namespace seedscale;

namespace {

const InitialBlocks kInit{2, 1};

QFamily seedbank_family(double K, InitialBlocks init) {
  return [K, init](double c) { return blockcounting_q({c, K, {}}, init); };
}

}  // namespace

TEST_CASE("scaling sequence validation") {
  CHECK_NOTHROW(ScalingSequence::ancient({0.2, 0.1, 0.05}));
  CHECK_THROWS_AS(ScalingSequence::ancient({}), std::invalid_argument);
  CHECK_THROWS_AS(ScalingSequence::ancient({0.1, 0.2}), std::invalid_argument);
  CHECK_THROWS_AS(ScalingSequence::ancient({0.2, -0.1}), std::invalid_argument);

  ScalingSequence bad;
  bad.c_values = {0.2, 0.1};
  bad.a_of = [](double) { return 1.0; };  // a does not grow
  bad.b_of = [](double c) { return 1.0 / c; };
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("step condition holds for the seed bank family") {
  ScalingSequence scaling = ScalingSequence::ancient({0.2, 0.1, 0.05, 0.02});
  StepConditionReport report =
      check_step_condition(seedbank_family(1.0, kInit), scaling);
  CHECK(report.verdict);
  REQUIRE(report.records.size() == 4);
  // q_k stays bounded while a_k grows like c^-2, so the ratio shrinks.
  CHECK(report.records.back().ratio < 0.1);
  for (std::size_t i = 1; i < report.records.size(); ++i) {
    CHECK(report.records[i].ratio < report.records[i - 1].ratio);
  }
}

TEST_CASE("projection detection recovers P and rejects slow mixing") {
  PrelimitDecomposition dec = prelimit_decomposition(0.05, 1.0, kInit);
  ProjectionResult result =
      detect_projection(dec.a_kappa, dec.a_scale, {1.0, 2.0, 4.0});
  CHECK(result.max_rounding_error < 0.05);
  GeneralMatrix p = projection_p(kInit);
  CHECK(matrix_norm(Eigen::MatrixXd(result.p_hat.entries() - p.entries())) ==
        doctest::Approx(0.0));
  for (std::size_t i = 1; i < result.residuals.size(); ++i) {
    CHECK(result.residuals[i].second <= result.residuals[i - 1].second);
  }

  // A lazy two-state chain mixes to (0.5, 0.5); rounding cannot produce a
  // projection there.
  StateSpace two = StateSpace::from_states({{0, 0}, {1, 0}});
  Eigen::MatrixXd lazy(2, 2);
  lazy << 0.9, 0.1, 0.1, 0.9;
  CHECK_THROWS_AS(
      detect_projection(TransitionMatrix(two, lazy), 400.0, {1.0}),
      std::runtime_error);
}

TEST_CASE("G extraction from the decomposition family") {
  GeneralMatrix p = projection_p(kInit);
  std::vector<std::pair<double, GeneralMatrix>> family;
  for (double c : {0.2, 0.1, 0.05, 0.02}) {
    family.emplace_back(c, prelimit_decomposition(c, 1.0, kInit).b_kappa);
  }
  GExtraction extraction = extract_g(p, family);
  CHECK(extraction.limit_supported);
  GeneralMatrix g = ancient_g(kInit, 1.0);
  CHECK(matrix_norm(Eigen::MatrixXd(extraction.g_hat.entries() - g.entries())) <
        5.0 * 0.02);

  // A family whose P B P residuals bump upward along the way must be flagged.
  std::vector<std::pair<double, GeneralMatrix>> drifting;
  drifting.emplace_back(0.2, g);
  drifting.emplace_back(0.1, GeneralMatrix(g.space(), 3.0 * g.entries()));
  drifting.emplace_back(0.05, g);
  CHECK(!extract_g(p, drifting).limit_supported);

  CHECK_THROWS_AS(extract_g(limit_b(kInit, 1.0), family),
                  std::invalid_argument);  // not idempotent
}

TEST_CASE("assembled limit matches the model-specific semigroup") {
  GeneralMatrix p = projection_p(kInit);
  GeneralMatrix g = ancient_g(kInit, 1.0);
  TransitionMatrix at_zero = assemble_limit(p, g, 0.0);
  CHECK(at_zero.at({2, 1}, {2, 1}) == 1.0);

  DegenerateSemigroup sg = DegenerateSemigroup::ancient(kInit, 1.0);
  for (double t : {0.3, 1.1}) {
    TransitionMatrix assembled = assemble_limit(p, g, t);
    TransitionMatrix reference = ancient_semigroup(sg, t);
    CHECK(matrix_norm(Eigen::MatrixXd(assembled.entries() -
                                      reference.entries())) < tol::cross_method);
  }

  CHECK_THROWS_AS(assemble_limit(p, limit_b(kInit, 1.0), 1.0),
                  std::invalid_argument);  // P B != B
  CHECK_THROWS_AS(assemble_limit(p, g, -0.1), std::invalid_argument);
}

TEST_CASE("discretization stays within the uniformization bound") {
  ScalingSequence scaling = ScalingSequence::ancient({0.2, 0.1, 0.05});
  DiscretizationReport report = verify_discretization_lemma(
      seedbank_family(1.0, kInit), scaling, {0.5, 1.0}, {2, 1});
  CHECK(report.all_within_bound);
  REQUIRE(report.records.size() == 6);
  for (const auto& r : report.records) {
    CHECK(r.tv <= r.bound + 1e-9);
    CHECK(r.bound < 1.0);
  }
}
