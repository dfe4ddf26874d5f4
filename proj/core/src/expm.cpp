#include "seedscale/expm.hpp"

#include <cmath>
#include <stdexcept>

#include "seedscale/tolerances.hpp"

namespace seedscale {

namespace {

// Poisson-weighted sum of powers of the uniformized stochastic matrix, for
// mu = lambda * t small enough that exp(-mu) does not underflow.
Eigen::MatrixXd uniformized_sum(const Eigen::MatrixXd& u, double mu) {
  const Eigen::Index n = u.rows();
  double weight = std::exp(-mu);
  double accumulated = weight;
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd sum = weight * term;
  // Tail target well below tol::expm_tail so that repeated squaring of the
  // factors stays inside the overall budget.
  const double target = 1.0 - 1e-15;
  int k = 0;
  while (accumulated < target && k < 10000) {
    ++k;
    term = term * u;
    weight *= mu / k;
    sum += weight * term;
    accumulated += weight;
  }
  // Renormalize rows: distributes the neglected tail mass proportionally and
  // keeps products of factors exactly stochastic.
  Eigen::VectorXd row_sums = sum.rowwise().sum();
  for (Eigen::Index i = 0; i < n; ++i) sum.row(i) /= row_sums(i);
  return sum;
}

}  // namespace

TransitionMatrix expm_conservative(const RateMatrix& q, double t) {
  if (t < 0.0) throw std::invalid_argument("expm_conservative: t must be >= 0");
  const auto n = static_cast<Eigen::Index>(q.size());
  const double lambda = q.max_exit_rate();
  if (t == 0.0 || lambda <= 0.0) {
    return TransitionMatrix::identity(q.space());
  }
  const double mu_total = lambda * t;
  // Split t so that each factor has mu <= 1, then square back up. All factors
  // are non-negative stochastic matrices, so the products lose no accuracy.
  int squarings = 0;
  double mu = mu_total;
  while (mu > 1.0) {
    mu *= 0.5;
    ++squarings;
  }
  Eigen::MatrixXd u =
      Eigen::MatrixXd::Identity(n, n) + q.entries() / lambda;
  Eigen::MatrixXd result = uniformized_sum(u, mu);
  for (int s = 0; s < squarings; ++s) result = result * result;
  result = result.cwiseMax(0.0);
  return {q.space(), std::move(result)};
}

GeneralMatrix expm_general(const GeneralMatrix& m, double t) {
  const auto n = static_cast<Eigen::Index>(m.size());
  Eigen::MatrixXd a = t * m.entries();
  int squarings = 0;
  double norm = matrix_norm(a);
  while (norm > 0.5) {
    norm *= 0.5;
    ++squarings;
  }
  a /= std::pow(2.0, squarings);

  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd sum = term;
  for (int k = 1; k <= 60; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
    if (matrix_norm(term) < 1e-18) break;
  }
  for (int s = 0; s < squarings; ++s) {
    sum = sum * sum;
    if (!sum.allFinite()) {
      throw std::runtime_error("expm_general: numerical failure during squaring");
    }
  }
  if (!sum.allFinite()) {
    throw std::runtime_error("expm_general: numerical failure");
  }
  return {m.space(), std::move(sum)};
}

}  // namespace seedscale
