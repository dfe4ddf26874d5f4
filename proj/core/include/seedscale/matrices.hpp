#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "seedscale/state_space.hpp"

namespace seedscale {

/// Dense real matrix over a StateSpace. Off-diagonal entries may be negative
/// (this is what houses G, B, A_k, B_k and P). Immutable after construction.
class GeneralMatrix {
 public:
  GeneralMatrix(StateSpace space, Eigen::MatrixXd entries);

  static GeneralMatrix zero(StateSpace space);
  static GeneralMatrix identity(StateSpace space);

  const StateSpace& space() const { return space_; }
  const Eigen::MatrixXd& entries() const { return m_; }
  std::size_t size() const { return space_.size(); }

  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  double at(BlockState from, BlockState to) const {
    return m_(space_.index(from), space_.index(to));
  }

 private:
  StateSpace space_;
  Eigen::MatrixXd m_;
};

/// Conservative Q-matrix: off-diagonal >= 0, rows sum to 0 within tol::build.
class RateMatrix {
 public:
  RateMatrix(StateSpace space, Eigen::MatrixXd entries);

  const StateSpace& space() const { return space_; }
  const Eigen::MatrixXd& entries() const { return m_; }
  std::size_t size() const { return space_.size(); }

  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  double at(BlockState from, BlockState to) const {
    return m_(space_.index(from), space_.index(to));
  }

  /// q := max_e { -Q[e,e] }.
  double max_exit_rate() const;

  GeneralMatrix to_general() const { return {space_, m_}; }

 private:
  StateSpace space_;
  Eigen::MatrixXd m_;
};

/// Row-stochastic matrix: entries in [-1e-12, 1+1e-12], rows sum to 1 within
/// tol::row_sum.
class TransitionMatrix {
 public:
  TransitionMatrix(StateSpace space, Eigen::MatrixXd entries);

  static TransitionMatrix identity(StateSpace space);

  const StateSpace& space() const { return space_; }
  const Eigen::MatrixXd& entries() const { return m_; }
  std::size_t size() const { return space_.size(); }

  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  double at(BlockState from, BlockState to) const {
    return m_(space_.index(from), space_.index(to));
  }

  /// Distribution row started from a single state.
  Eigen::VectorXd row(BlockState from) const {
    return m_.row(space_.index(from)).transpose();
  }

  GeneralMatrix to_general() const { return {space_, m_}; }

 private:
  StateSpace space_;
  Eigen::MatrixXd m_;
};

/// max_e sum_ebar |A(e, ebar)| (maximum absolute row sum).
double matrix_norm(const Eigen::MatrixXd& m);
double matrix_norm(const GeneralMatrix& m);

/// A^r by binary exponentiation; A^0 = identity. Throws on overflow/NaN.
GeneralMatrix matrix_power(const GeneralMatrix& a, std::uint64_t r);

/// (1/2) sum_i |p_i - q_i| for probability rows over the same space.
/// Rejects mismatched spaces and rows that do not sum to 1 within
/// tol::prob_row_sum.
double total_variation(const StateSpace& p_space, const Eigen::VectorXd& p,
                       const StateSpace& q_space, const Eigen::VectorXd& q);
double total_variation(const StateSpace& space, const Eigen::VectorXd& p,
                       const Eigen::VectorXd& q);

}  // namespace seedscale
