#pragma once

#include <Eigen/Dense>
#include <vector>

#include "seedscale/matrices.hpp"
#include "seedscale/rng.hpp"

namespace seedscale {

/// One realization of a continuous-time chain on [0, horizon].
struct PathSample {
  std::vector<double> jump_times;    // strictly increasing, all <= horizon
  std::vector<BlockState> visited;   // one longer than jump_times
  double horizon = 0.0;

  /// State occupied at time t (cadlag).
  BlockState state_at(double t) const;

  /// Total time spent in `s` on [0, horizon].
  double occupation_time(BlockState s) const;
};

/// Gillespie sampling: exponential holding times with rate -Q[s,s], next state
/// proportional to the off-diagonal row entries. Zero rows absorb.
PathSample sample_path(const RateMatrix& q, BlockState start, double horizon,
                       RngStream& rng);

/// Empirical distribution of end states over replicates [0, replicates) of
/// sample_path observed at time t, using per-replicate streams derived from
/// master_seed.
Eigen::VectorXd empirical_marginal(const RateMatrix& q, BlockState start,
                                   double t, std::size_t replicates,
                                   std::uint64_t master_seed);

}  // namespace seedscale
