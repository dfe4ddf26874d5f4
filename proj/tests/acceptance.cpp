// End-to-end acceptance gate: each numbered check prints a single pass/fail
// line; the process exits nonzero if any check fails.

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "seedscale/csv.hpp"
#include "seedscale/diffusion.hpp"
#include "seedscale/duality.hpp"
#include "seedscale/expm.hpp"
#include "seedscale/matrices.hpp"
#include "seedscale/seedbank.hpp"
#include "seedscale/timescale.hpp"
#include "seedscale/tolerances.hpp"

using namespace seedscale;

namespace {

int failures = 0;

void report(int index, const std::string& name, bool pass,
            const std::string& detail) {
  std::printf("[%s] %02d %s (%s)\n", pass ? "PASS" : "FAIL", index,
              name.c_str(), detail.c_str());
  if (!pass) ++failures;
}

// 1. The limit generator factors through the projection exactly.
void check_projected_identity() {
  double worst = 0.0;
  for (int n0 = 0; n0 <= 6; ++n0) {
    for (int m0 = 0; m0 + n0 <= 6; ++m0) {
      if (n0 + m0 < 1) continue;
      for (double K : {0.5, 1.0, 2.0}) {
        InitialBlocks init{n0, m0};
        GeneralMatrix p = projection_p(init);
        Eigen::MatrixXd pbp =
            p.entries() * limit_b(init, K).entries() * p.entries();
        worst = std::max(worst, (pbp - ancient_g(init, K).entries())
                                    .cwiseAbs()
                                    .maxCoeff());
      }
    }
  }
  report(1, "projection-factorized generator identity", worst <= tol::build,
         "max entrywise error " + format_real(worst));
}

// 2. The degenerate semigroup is stochastic, consistent, and leaves no mass
// on states with two or more active lineages.
void check_semigroup_validity() {
  DegenerateSemigroup sg = DegenerateSemigroup::ancient({3, 2}, 1.0);
  bool pass = true;
  std::string detail = "rows stochastic, composition and support ok";
  for (double t : {1e-3, 0.1, 0.3, 1.0, 1.1, 1.4}) {
    TransitionMatrix pi = ancient_semigroup(sg, t);
    for (std::size_t i = 0; i < pi.size() && pass; ++i) {
      double row_sum = 0.0;
      for (std::size_t j = 0; j < pi.size(); ++j) {
        if (pi(i, j) < -1e-12) pass = false;
        row_sum += pi(i, j);
      }
      if (std::abs(row_sum - 1.0) > 1e-10) pass = false;
    }
    if (!pass) detail = "row failure at t=" + format_real(t);
  }
  for (double s : {0.3, 1.1}) {
    for (double t : {0.3, 1.1}) {
      Eigen::MatrixXd lhs = ancient_semigroup(sg, s).entries() *
                            ancient_semigroup(sg, t).entries();
      Eigen::MatrixXd rhs = ancient_semigroup(sg, s + t).entries();
      const double err = matrix_norm(Eigen::MatrixXd(lhs - rhs));
      if (err > 1e-8) {
        pass = false;
        detail = "composition error " + format_real(err);
      }
    }
  }
  for (double t : {1e-3, 0.1, 1.0}) {
    TransitionMatrix pi = ancient_semigroup(sg, t);
    for (std::size_t i = 0; i < pi.size(); ++i) {
      for (std::size_t j = 0; j < pi.size(); ++j) {
        if (pi.space().state(j).active >= 2 && std::abs(pi(i, j)) >= 1e-10) {
          pass = false;
          detail = "mass on an instantaneous state at t=" + format_real(t);
        }
      }
    }
  }
  report(2, "degenerate semigroup validity", pass, detail);
}

// 3. The sped-up chains converge to the limit semigroup in total variation.
void check_chain_convergence() {
  ConvergenceReport rep = chain_convergence_tv({0.2, 0.1, 0.05, 0.02}, 1.0,
                                               {3, 2}, {0.5, 1.0, 2.0});
  const bool pass = rep.marginal_monotone && rep.final_tv < 0.05;
  report(3, "chain scaling limit in total variation", pass,
         std::string(rep.marginal_monotone ? "TV decreasing" : "TV not monotone") +
             ", final TV " + format_real(rep.final_tv));
}

// Shared pipeline run for checks 4 and 5.
bool run_pipeline(InitialBlocks init, double K, bool imbalanced,
                  std::string* detail) {
  const std::vector<double> c_list{0.2, 0.1, 0.05, 0.02};
  auto decompose = [&](double c) {
    return imbalanced ? prelimit_decomposition_imbalanced(c, K, init)
                      : prelimit_decomposition(c, K, init);
  };
  QFamily family = [&](double c) {
    return imbalanced ? structured_q({c, K, c}, init)
                      : blockcounting_q({c, K, {}}, init);
  };
  ScalingSequence scaling = ScalingSequence::ancient(c_list);
  StepConditionReport step = check_step_condition(family, scaling);

  PrelimitDecomposition at_half = decompose(0.05);
  ProjectionResult projection =
      detect_projection(at_half.a_kappa, at_half.a_scale, {1.0, 2.0, 4.0});
  const bool p_exact =
      (projection.p_hat.entries() - projection_p(init).entries())
          .cwiseAbs()
          .maxCoeff() == 0.0;

  std::vector<std::pair<double, GeneralMatrix>> b_family;
  for (double c : c_list) b_family.emplace_back(c, decompose(c).b_kappa);
  GExtraction extraction = extract_g(projection.p_hat, b_family);
  GeneralMatrix reference =
      imbalanced ? imbalanced_ghat(init, K) : ancient_g(init, K);
  const double g_err = (extraction.g_hat.entries() - reference.entries())
                           .cwiseAbs()
                           .maxCoeff();
  const double g_budget = 5.0 * c_list.back();

  DiscretizationReport disc =
      verify_discretization_lemma(family, scaling, {0.5, 1.0}, {init.n0, init.m0});
  bool with_margin = true;
  for (const auto& r : disc.records) {
    if (!(r.tv < r.bound)) with_margin = false;
  }

  *detail = "rounding " + format_real(projection.max_rounding_error) +
            ", generator error " + format_real(g_err) + " (budget " +
            format_real(g_budget) + ")";
  return step.verdict && projection.max_rounding_error < 0.05 && p_exact &&
         extraction.limit_supported && g_err < g_budget && with_margin;
}

// 4. The generic two-scale pipeline recovers (P, G) for the seed bank family.
void check_pipeline_recovery() {
  std::string detail;
  const bool pass = run_pipeline({3, 2}, 1.0, false, &detail);
  report(4, "generic pipeline recovers the seed bank limit", pass, detail);
}

// 5. The same pipeline handles the imbalanced-island variant.
void check_pipeline_imbalanced() {
  std::string detail;
  const bool pass = run_pipeline({2, 2}, 1.0, true, &detail);
  report(5, "generic pipeline recovers the imbalanced-island limit", pass,
         detail);
}

MomentGrid prelimit_grid() {
  MomentGrid grid;
  for (int n = 0; n <= 2; ++n) {
    for (int m = 0; m <= 2; ++m) grid.pairs.emplace_back(n, m);
  }
  grid.points = {{0.5, 0.5}, {0.3, 0.9}};
  grid.times = {0.1, 1.0};
  return grid;
}

// 6. Prelimit moment duality, including the mutation sensitivity guard.
void check_prelimit_duality() {
  MomentGrid grid = prelimit_grid();
  RateMatrix q = blockcounting_q({1.0, 1.0, {}}, {2, 2});
  DualityReport rep =
      verify_prelimit_duality(q, 1.0, 1.0, grid, 1e-3, 100000, 20240601);
  RateMatrix corrupted = perturb_rate(q, {1, 0}, {0, 1}, 1.2);
  DualityReport mutated =
      verify_prelimit_duality(corrupted, 1.0, 1.0, grid, 1e-3, 100000, 20240601);
  std::size_t failed = 0;
  for (const auto& cell : rep.cells) failed += cell.pass ? 0 : 1;
  report(6, "prelimit moment duality with mutation guard",
         rep.all_pass && !mutated.all_pass,
         std::to_string(rep.cells.size()) + " cells, " +
             std::to_string(failed) + " failed; corrupted run " +
             (mutated.all_pass ? "missed" : "caught"));
}

// 7. Limit moment duality plus n-independence of the limit moments.
void check_limit_duality() {
  MomentGrid grid;
  for (int n = 0; n <= 1; ++n) {
    for (int m = 0; m <= 2; ++m) grid.pairs.emplace_back(n, m);
  }
  grid.points = {{0.0, 0.7}, {1.0, 0.3}};
  grid.times = {0.5, 2.0};
  bool pass = true;
  for (double K : {1.0, 2.0}) {
    DualityReport rep = verify_limit_duality(K, grid, 100000, 7777);
    if (!rep.all_pass) pass = false;
  }
  double max_spread = 0.0;
  DegenerateSemigroup sg = DegenerateSemigroup::ancient({5, 0}, 1.0);
  for (double t : {0.5, 2.0}) {
    TransitionMatrix pi = ancient_semigroup(sg, t);
    const double reference = chain_moment_exact(pi, {1, 0}, 0.3, 0.9);
    for (int n = 2; n <= 5; ++n) {
      max_spread = std::max(
          max_spread,
          std::abs(chain_moment_exact(pi, {n, 0}, 0.3, 0.9) - reference));
    }
  }
  if (max_spread > 1e-12) pass = false;
  report(7, "limit moment duality and n-independence", pass,
         "moment spread over n: " + format_real(max_spread));
}

// 8. The weighted frequency is a martingale on both sides of the limit.
void check_martingale() {
  FixationReport limit =
      fixation_check_limit({0, 0.6}, 1.0, {0.5, 2.0, 8.0}, 100000, 31);
  FixationReport prelimit = fixation_check_prelimit(
      {0.5, 0.5}, 1.0, 1.0, {0.5, 2.0, 8.0}, 1e-3, 30000, 32);
  report(8, "martingale conservation of the weighted frequency",
         limit.all_pass && prelimit.all_pass,
         std::string("limit ") + (limit.all_pass ? "ok" : "drifted") +
             ", prelimit " + (prelimit.all_pass ? "ok" : "drifted"));
}

// 9. Sparks: occupation of (2,0) vanishes while excursions persist.
void check_sparks() {
  std::vector<SparkReport> reps;
  for (double c : {0.2, 0.1, 0.05}) {
    reps.push_back(spark_statistic(c, 1.0, 1.0, 10000, 4242));
  }
  bool occupation_decreasing = true;
  for (std::size_t i = 1; i < reps.size(); ++i) {
    if (!(reps[i].occupation_fraction < reps[i - 1].occupation_fraction)) {
      occupation_decreasing = false;
    }
  }
  double lo = reps[0].excursions_per_path, hi = lo;
  for (const auto& r : reps) {
    lo = std::min(lo, r.excursions_per_path);
    hi = std::max(hi, r.excursions_per_path);
  }
  const bool excursions_stable = lo > 0.0 && hi <= 2.0 * lo;
  report(9, "spark occupation vanishes while excursions persist",
         occupation_decreasing && excursions_stable,
         "occupation " + format_real(reps.front().occupation_fraction) + " -> " +
             format_real(reps.back().occupation_fraction) +
             ", excursions in [" + format_real(lo) + ", " + format_real(hi) +
             "]");
}

// CSV serializations for the determinism check.
std::string duality_csv(const DualityReport& rep) {
  std::ostringstream out;
  CsvWriter csv(out);
  csv.metadata("bias", rep.bias_allowance);
  csv.header({"n", "m", "x", "y", "t", "chain", "mc", "sigma", "pass"});
  for (const auto& c : rep.cells) {
    csv.row().field(static_cast<std::int64_t>(c.n))
        .field(static_cast<std::int64_t>(c.m)).field(c.x).field(c.y).field(c.t)
        .field(c.chain_exact).field(c.diffusion_mc_mean).field(c.mc_sigma)
        .field(std::string(c.pass ? "1" : "0")).done();
  }
  return out.str();
}

std::string fixation_csv(const FixationReport& rep) {
  std::ostringstream out;
  CsvWriter csv(out);
  csv.metadata("conserved", rep.conserved_value);
  csv.header({"t", "mean", "sigma", "pass"});
  for (const auto& r : rep.records) {
    csv.row().field(r.t).field(r.mean).field(r.sigma)
        .field(std::string(r.pass ? "1" : "0")).done();
  }
  return out.str();
}

std::string spark_csv(const SparkReport& rep) {
  std::ostringstream out;
  CsvWriter csv(out);
  csv.header({"c", "occupation", "excursions"});
  csv.row().field(rep.c).field(rep.occupation_fraction)
      .field(rep.excursions_per_path).done();
  return out.str();
}

// 10. Same seed, same bytes: the Monte Carlo reports above serialize
// identically across repeated runs.
void check_determinism() {
  MomentGrid grid = prelimit_grid();
  grid.times = {0.5};
  RateMatrix q = blockcounting_q({1.0, 1.0, {}}, {2, 2});
  auto round_trip = [&]() {
    std::string all;
    all += duality_csv(verify_prelimit_duality(q, 1.0, 1.0, grid, 1e-3, 2000, 99));
    MomentGrid lgrid;
    lgrid.pairs = {{1, 0}, {0, 1}};
    lgrid.points = {{0.0, 0.7}};
    lgrid.times = {0.5, 2.0};
    all += duality_csv(verify_limit_duality(1.0, lgrid, 5000, 98));
    all += fixation_csv(fixation_check_limit({0, 0.6}, 1.0, {0.5, 2.0}, 5000, 97));
    all += fixation_csv(
        fixation_check_prelimit({0.5, 0.5}, 1.0, 1.0, {0.5}, 1e-3, 2000, 96));
    all += spark_csv(spark_statistic(0.1, 1.0, 1.0, 2000, 95));
    return all;
  };
  const std::string first = round_trip();
  const std::string second = round_trip();
  report(10, "seeded reruns serialize byte-identically", first == second,
         std::to_string(first.size()) + " bytes compared");
}

}  // namespace

int main() {
  check_projected_identity();
  check_semigroup_validity();
  check_chain_convergence();
  check_pipeline_recovery();
  check_pipeline_imbalanced();
  check_prelimit_duality();
  check_limit_duality();
  check_martingale();
  check_sparks();
  check_determinism();
  if (failures == 0) {
    std::printf("all acceptance checks passed\n");
    return 0;
  }
  std::printf("%d acceptance check(s) failed\n", failures);
  return 1;
}
