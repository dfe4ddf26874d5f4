#include "seedscale/timescale.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "seedscale/expm.hpp"
#include "seedscale/tolerances.hpp"

namespace seedscale {

void ScalingSequence::validate() const {
  if (c_values.empty()) throw std::invalid_argument("ScalingSequence: empty c list");
  if (!a_of || !b_of) throw std::invalid_argument("ScalingSequence: missing a_of/b_of");
  for (std::size_t i = 0; i < c_values.size(); ++i) {
    if (!(c_values[i] > 0.0)) {
      throw std::invalid_argument("ScalingSequence: c values must be positive");
    }
    if (i > 0 && !(c_values[i] < c_values[i - 1])) {
      throw std::invalid_argument("ScalingSequence: c values must be strictly decreasing");
    }
  }
  double prev_a = 0.0, prev_ba = 0.0;
  for (double c : c_values) {
    const double a = a_of(c), b = b_of(c);
    if (!(a > 0.0) || !(b > 0.0)) {
      throw std::invalid_argument("ScalingSequence: a_of and b_of must be positive");
    }
    if (a <= prev_a || b / a <= prev_ba) {
      throw std::invalid_argument(
          "ScalingSequence: a_of(c) and b_of(c)/a_of(c) must increase as c shrinks");
    }
    prev_a = a;
    prev_ba = b / a;
  }
}

ScalingSequence ScalingSequence::ancient(std::vector<double> c_values) {
  ScalingSequence s;
  s.c_values = std::move(c_values);
  s.a_of = [](double c) { return 1.0 / (c * c); };
  s.b_of = [](double c) { return 1.0 / (c * c * c); };
  s.validate();
  return s;
}

StepConditionReport check_step_condition(const QFamily& q_family,
                                         const ScalingSequence& scaling) {
  scaling.validate();
  StepConditionReport report;
  for (double c : scaling.c_values) {
    RateMatrix q = q_family(c);
    const double qk = q.max_exit_rate();
    report.records.push_back({c, qk, qk / scaling.a_of(c)});
  }
  report.verdict = true;
  for (std::size_t i = 1; i < report.records.size(); ++i) {
    if (!(report.records[i].ratio < report.records[i - 1].ratio)) {
      report.verdict = false;
    }
  }
  if (!(report.records.back().ratio < 0.1)) report.verdict = false;
  return report;
}

ProjectionResult detect_projection(const TransitionMatrix& a_kappa,
                                   double a_kappa_value,
                                   const std::vector<double>& c_grid) {
  if (c_grid.empty()) throw std::invalid_argument("detect_projection: empty C grid");
  const double c_max = *std::max_element(c_grid.begin(), c_grid.end());
  const auto r_max = static_cast<std::uint64_t>(std::ceil(c_max * a_kappa_value));
  GeneralMatrix top_power = matrix_power(a_kappa.to_general(), r_max);

  const auto n = static_cast<Eigen::Index>(a_kappa.size());
  Eigen::MatrixXd rounded(n, n);
  double max_rounding = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double v = top_power(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      const double r = std::round(v);
      rounded(i, j) = r;
      max_rounding = std::max(max_rounding, std::abs(v - r));
    }
  }
  if (max_rounding > 0.05) {
    throw std::runtime_error("detect_projection: rounding error " +
                             std::to_string(max_rounding) +
                             " exceeds 0.05; no clean projection at this kappa");
  }
  if (((rounded * rounded) - rounded).cwiseAbs().maxCoeff() != 0.0) {
    throw std::runtime_error("detect_projection: rounded limit is not idempotent");
  }
  GeneralMatrix p_hat(a_kappa.space(), std::move(rounded));

  ProjectionResult result{p_hat, {}, max_rounding};
  for (double c : c_grid) {
    const auto r = static_cast<std::uint64_t>(std::ceil(c * a_kappa_value));
    GeneralMatrix power = matrix_power(a_kappa.to_general(), r);
    result.residuals.emplace_back(
        c, matrix_norm(Eigen::MatrixXd(power.entries() - p_hat.entries())));
  }
  return result;
}

GExtraction extract_g(const GeneralMatrix& p_hat,
                      const std::vector<std::pair<double, GeneralMatrix>>& b_family) {
  if (b_family.empty()) throw std::invalid_argument("extract_g: empty family");
  const Eigen::MatrixXd& p = p_hat.entries();
  if (((p * p) - p).cwiseAbs().maxCoeff() > tol::build) {
    throw std::invalid_argument("extract_g: P_hat is not idempotent");
  }
  Eigen::MatrixXd g_hat = p * b_family.back().second.entries() * p;

  GExtraction result{GeneralMatrix(p_hat.space(), g_hat), {}, true};
  for (const auto& [c, b_kappa] : b_family) {
    Eigen::MatrixXd pbp = p * b_kappa.entries() * p;
    result.pbp_residuals.emplace_back(c, matrix_norm(Eigen::MatrixXd(pbp - g_hat)));
  }
  for (std::size_t i = 1; i < result.pbp_residuals.size(); ++i) {
    if (result.pbp_residuals[i].second > result.pbp_residuals[i - 1].second + tol::build) {
      result.limit_supported = false;  // limit existence not supported
    }
  }
  return result;
}

TransitionMatrix assemble_limit(const GeneralMatrix& p_hat,
                                const GeneralMatrix& g_hat, double t) {
  if (t < 0.0) throw std::invalid_argument("assemble_limit: t must be >= 0");
  if (t == 0.0) return TransitionMatrix::identity(p_hat.space());
  const Eigen::MatrixXd& p = p_hat.entries();
  const Eigen::MatrixXd& g = g_hat.entries();
  if (matrix_norm(Eigen::MatrixXd(p * g - g)) > tol::algebraic ||
      matrix_norm(Eigen::MatrixXd(g * p - g)) > tol::algebraic) {
    throw std::invalid_argument("assemble_limit: P G = G P = G fails; Pe^{tG} "
                                "is not a semigroup without it");
  }
  GeneralMatrix exp_tg = expm_general(g_hat, t);
  Eigen::MatrixXd pi = p * exp_tg.entries();
  return {p_hat.space(), std::move(pi)};  // ctor enforces row-stochasticity
}

DiscretizationReport verify_discretization_lemma(const QFamily& q_family,
                                                 const ScalingSequence& scaling,
                                                 const std::vector<double>& t_grid,
                                                 BlockState start) {
  scaling.validate();
  DiscretizationReport report;
  report.all_within_bound = true;
  for (double c : scaling.c_values) {
    RateMatrix q = q_family(c);
    const auto start_idx = static_cast<Eigen::Index>(q.space().index(start));
    const double a = scaling.a_of(c), b = scaling.b_of(c);
    const double qk = q.max_exit_rate();
    const double bound = 1.0 - std::exp(-qk / a);
    TransitionMatrix pi_kappa = expm_conservative(q, 1.0 / a);
    for (double t : t_grid) {
      const auto steps = static_cast<std::uint64_t>(std::floor(b * t));
      TransitionMatrix continuous = expm_conservative(q, b * t / a);
      GeneralMatrix discrete = matrix_power(pi_kappa.to_general(), steps);
      const double tv = total_variation(
          q.space(), continuous.entries().row(start_idx).transpose(),
          discrete.entries().row(start_idx).transpose());
      report.records.push_back({c, t, tv, bound});
      if (!(tv <= bound + 1e-9)) report.all_within_bound = false;
    }
  }
  return report;
}

}  // namespace seedscale
