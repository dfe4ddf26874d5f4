#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "seedscale/matrices.hpp"

namespace seedscale {

/// c -> Q-matrix of the prelimit family.
using QFamily = std::function<RateMatrix(double c)>;

/// Scale parameters c_k with the discretization density a_k and speed-up b_k.
struct ScalingSequence {
  std::vector<double> c_values;           // strictly decreasing, > 0
  std::function<double(double)> a_of;     // c -> a_k
  std::function<double(double)> b_of;     // c -> b_k

  /// Rejects empty or non-decreasing c lists and checks that a_of(c) and
  /// b_of(c)/a_of(c) grow along the list.
  void validate() const;

  /// a = c^-2, b = c^-3 (the ancient material scaling).
  static ScalingSequence ancient(std::vector<double> c_values);
};

struct StepConditionRecord {
  double c_kappa = 0.0;
  double q_kappa = 0.0;  // max_e { -Q^k[e,e] }
  double ratio = 0.0;    // q_k / a_k
};

struct StepConditionReport {
  std::vector<StepConditionRecord> records;
  bool verdict = false;  // ratios strictly decreasing and final ratio < 0.1
};

/// Checks the step-size condition q_k / a_k -> 0 along the supplied list.
StepConditionReport check_step_condition(const QFamily& q_family,
                                         const ScalingSequence& scaling);

struct ProjectionResult {
  GeneralMatrix p_hat;
  /// (C, ||A_k^{ceil(C a_k)} - P_hat||) per C in the grid.
  std::vector<std::pair<double, double>> residuals;
  double max_rounding_error = 0.0;
};

/// P_hat = round(A_k^R) with R = ceil(C_max a_k). Throws if the rounding
/// error exceeds 0.05 or the rounded limit is not idempotent.
ProjectionResult detect_projection(const TransitionMatrix& a_kappa,
                                   double a_kappa_value,
                                   const std::vector<double>& c_grid);

struct GExtraction {
  GeneralMatrix g_hat;
  /// (c, ||P B_k P - G_hat||) per family member, in the supplied order.
  std::vector<std::pair<double, double>> pbp_residuals;
  bool limit_supported = false;  // residuals decreasing along shrinking c
};

/// G_hat = P B_k P at the smallest c of the family (no extrapolation);
/// residuals must decrease along the list or the limit is flagged as
/// unsupported. Family entries are (c, B_k) with c decreasing.
GExtraction extract_g(const GeneralMatrix& p_hat,
                      const std::vector<std::pair<double, GeneralMatrix>>& b_family);

/// P e^{t G_hat} via the general matrix exponential; t = 0 is the identity by
/// convention. Rejects P G != G P != G (within tol::algebraic) and
/// non-stochastic output.
TransitionMatrix assemble_limit(const GeneralMatrix& p_hat,
                                const GeneralMatrix& g_hat, double t);

struct DiscretizationRecord {
  double c_kappa = 0.0;
  double t = 0.0;
  double tv = 0.0;     // exact TV between continuous and discretized marginals
  double bound = 0.0;  // 1 - exp(-q_k / a_k)
};

struct DiscretizationReport {
  std::vector<DiscretizationRecord> records;
  bool all_within_bound = false;  // tv <= bound + 1e-9 everywhere
};

/// Exact marginal of the continuous chain at b_k t / a_k versus the
/// discretized chain at step floor(b_k t), from `start`, per (c, t).
DiscretizationReport verify_discretization_lemma(const QFamily& q_family,
                                                 const ScalingSequence& scaling,
                                                 const std::vector<double>& t_grid,
                                                 BlockState start);

}  // namespace seedscale
