#include "seedscale/matrices.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "seedscale/tolerances.hpp"

namespace seedscale {

namespace {

void check_square(const StateSpace& space, const Eigen::MatrixXd& m,
                  const char* what) {
  const auto n = static_cast<Eigen::Index>(space.size());
  if (m.rows() != n || m.cols() != n) {
    throw std::invalid_argument(std::string(what) + ": entries must be " +
                                std::to_string(n) + "x" + std::to_string(n));
  }
  if (!m.allFinite()) {
    throw std::invalid_argument(std::string(what) + ": non-finite entry");
  }
}

}  // namespace

GeneralMatrix::GeneralMatrix(StateSpace space, Eigen::MatrixXd entries)
    : space_(std::move(space)), m_(std::move(entries)) {
  check_square(space_, m_, "GeneralMatrix");
}

GeneralMatrix GeneralMatrix::zero(StateSpace space) {
  const auto n = static_cast<Eigen::Index>(space.size());
  return {std::move(space), Eigen::MatrixXd::Zero(n, n)};
}

GeneralMatrix GeneralMatrix::identity(StateSpace space) {
  const auto n = static_cast<Eigen::Index>(space.size());
  return {std::move(space), Eigen::MatrixXd::Identity(n, n)};
}

RateMatrix::RateMatrix(StateSpace space, Eigen::MatrixXd entries)
    : space_(std::move(space)), m_(std::move(entries)) {
  check_square(space_, m_, "RateMatrix");
  const auto n = static_cast<Eigen::Index>(space_.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j && m_(i, j) < 0.0) {
        throw std::invalid_argument("RateMatrix: negative off-diagonal rate in row " +
                                    space_.label(i) + " at column " + space_.label(j));
      }
    }
    const double row_sum = m_.row(i).sum();
    if (std::abs(row_sum) > tol::build) {
      throw std::invalid_argument("RateMatrix: row " + space_.label(i) +
                                  " sums to " + std::to_string(row_sum) +
                                  ", not conservative");
    }
  }
}

double RateMatrix::max_exit_rate() const {
  return (-m_.diagonal()).maxCoeff();
}

TransitionMatrix::TransitionMatrix(StateSpace space, Eigen::MatrixXd entries)
    : space_(std::move(space)), m_(std::move(entries)) {
  check_square(space_, m_, "TransitionMatrix");
  const auto n = static_cast<Eigen::Index>(space_.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (m_(i, j) < tol::entry_floor || m_(i, j) > 1.0 - tol::entry_floor) {
        throw std::invalid_argument("TransitionMatrix: entry (" + space_.label(i) +
                                    "," + space_.label(j) + ") = " +
                                    std::to_string(m_(i, j)) + " outside [0,1]");
      }
    }
    const double row_sum = m_.row(i).sum();
    if (std::abs(row_sum - 1.0) > tol::row_sum) {
      throw std::invalid_argument("TransitionMatrix: row " + space_.label(i) +
                                  " sums to " + std::to_string(row_sum));
    }
  }
}

TransitionMatrix TransitionMatrix::identity(StateSpace space) {
  const auto n = static_cast<Eigen::Index>(space.size());
  return {std::move(space), Eigen::MatrixXd::Identity(n, n)};
}

double matrix_norm(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return 0.0;
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

double matrix_norm(const GeneralMatrix& m) { return matrix_norm(m.entries()); }

GeneralMatrix matrix_power(const GeneralMatrix& a, std::uint64_t r) {
  const auto n = static_cast<Eigen::Index>(a.size());
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd base = a.entries();
  while (r > 0) {
    if (r & 1u) result = result * base;
    r >>= 1u;
    if (r > 0) base = base * base;
    if (!result.allFinite() || !base.allFinite()) {
      throw std::runtime_error("matrix_power: numeric overflow");
    }
  }
  return {a.space(), std::move(result)};
}

double total_variation(const StateSpace& p_space, const Eigen::VectorXd& p,
                       const StateSpace& q_space, const Eigen::VectorXd& q) {
  if (!(p_space == q_space)) {
    throw std::invalid_argument("total_variation: mismatched state spaces");
  }
  return total_variation(p_space, p, q);
}

double total_variation(const StateSpace& space, const Eigen::VectorXd& p,
                       const Eigen::VectorXd& q) {
  const auto n = static_cast<Eigen::Index>(space.size());
  if (p.size() != n || q.size() != n) {
    throw std::invalid_argument("total_variation: row length does not match space");
  }
  if (std::abs(p.sum() - 1.0) > tol::prob_row_sum ||
      std::abs(q.sum() - 1.0) > tol::prob_row_sum) {
    throw std::invalid_argument("total_variation: input is not a probability row");
  }
  return 0.5 * (p - q).cwiseAbs().sum();
}

}  // namespace seedscale
