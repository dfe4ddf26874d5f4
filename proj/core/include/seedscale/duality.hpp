#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "seedscale/diffusion.hpp"
#include "seedscale/matrices.hpp"
#include "seedscale/seedbank.hpp"

namespace seedscale {

/// x^n with the 0^0 = 1 convention, integer exponent n >= 0.
double ipow(double x, int n);

struct MomentGrid {
  std::vector<std::pair<int, int>> pairs;       // (n, m) exponents
  std::vector<std::pair<double, double>> points; // (x, y) in [0,1]^2
  std::vector<double> times;                    // t > 0
  int max_exponent = 4;                         // variance guard

  void validate() const;
};

struct DualityCell {
  int n = 0, m = 0;
  double x = 0.0, y = 0.0, t = 0.0;
  double chain_exact = 0.0;
  double diffusion_mc_mean = 0.0;
  double mc_sigma = 0.0;
  bool pass = false;  // |chain_exact - diffusion_mc_mean| <= 3 sigma + bias
};

struct DualityReport {
  std::vector<DualityCell> cells;
  double bias_allowance = 0.0;
  bool all_pass = false;
};

/// Mixed moment sum_{(nb,mb)} x^nb y^mb p_t(start, (nb,mb)) for a transition
/// row, with 0^0 = 1. Rejects start outside the space.
double chain_moment_exact(const TransitionMatrix& p_t, BlockState start,
                          double x, double y);

/// Sample mean and standard error of X(t)^n Y(t)^m over `replicates`
/// independent runs of `endpoint`, which maps a per-replicate stream to the
/// state at time t. Requires replicates >= 100.
std::pair<double, double> diffusion_moment_mc(
    const std::function<DiffusionState(RngStream&)>& endpoint, int n, int m,
    std::size_t replicates, std::uint64_t master_seed);

/// Scales the off-diagonal rate from -> to by `factor` and rebalances the
/// diagonal, for mutation testing of the duality harness.
RateMatrix perturb_rate(const RateMatrix& q, BlockState from, BlockState to,
                        double factor);

/// Moment duality between the block-counting chain generated by `q` and the
/// seed bank diffusion with parameters (c, K): chain side exact via
/// expm_conservative, diffusion side EM Monte Carlo with step h. Trajectories
/// are shared across exponent pairs per (point, time). Pass needs
/// |chain - mc| <= 3 sigma + bias_allowance in every cell.
DualityReport verify_prelimit_duality(const RateMatrix& q, double c, double K,
                                      const MomentGrid& grid, double h,
                                      std::size_t replicates,
                                      std::uint64_t master_seed,
                                      double bias_allowance = 5e-3);

/// Moment duality between the restricted limit chain (expm of the conservative
/// strip generator) and the exact limit jump sampler. Grid points must have
/// x in {0,1}; the sampler is exact so the tolerance is 3 sigma only.
DualityReport verify_limit_duality(double K, const MomentGrid& grid,
                                   std::size_t replicates,
                                   std::uint64_t master_seed);

struct ConvergenceRecord {
  double c = 0.0;
  double t = 0.0;
  double tv = 0.0;
};

struct ConvergenceReport {
  std::vector<ConvergenceRecord> records;       // one per (c, t), c outer
  std::vector<ConvergenceRecord> two_time;      // joint law at (t1, t2), t = t2
  bool marginal_monotone = false;  // TV strictly decreasing in c at each t
  bool two_time_monotone = false;
  double final_tv = 0.0;           // largest TV at the smallest c
};

/// Exact total variation between the sped-up prelimit law at t/c and the
/// limit semigroup row, per (c, t), plus a two-time joint comparison at
/// (t1, t2) = (0.5, 1.5) built by Markov composition on both sides.
/// Requires c values decreasing and all <= 0.5.
ConvergenceReport chain_convergence_tv(const std::vector<double>& c_list,
                                       double K, InitialBlocks start,
                                       const std::vector<double>& t_list);

struct SparkReport {
  double c = 0.0;
  std::size_t replicates = 0;
  double occupation_fraction = 0.0;  // mean fraction of model time in (2,0)
  double excursions_per_path = 0.0;  // mean count of (1,1)->(2,0)->(1,0)
};

/// Sampled rescaled paths from (1,1) over model time horizon/c: occupation
/// fraction of the spark state (2,0) and completed excursion counts.
SparkReport spark_statistic(double c, double K, double horizon,
                            std::size_t replicates, std::uint64_t master_seed);

struct FixationRecord {
  double t = 0.0;
  double mean = 0.0;
  double sigma = 0.0;
  bool pass = false;
};

struct FixationReport {
  double conserved_value = 0.0;  // (K x0 + y0) / (K + 1)
  std::vector<FixationRecord> records;
  bool all_pass = false;
};

/// E[(K X + Y)/(K+1)] is conserved by the limit process; checks the empirical
/// mean at each t against its start value within 3 sigma.
FixationReport fixation_check_limit(JumpState start, double K,
                                    const std::vector<double>& t_list,
                                    std::size_t replicates,
                                    std::uint64_t master_seed);

/// Same conservation for the prelimit diffusion, EM-simulated; tolerance
/// 3 sigma + bias_allowance for the discretization.
FixationReport fixation_check_prelimit(DiffusionState start, double c, double K,
                                       const std::vector<double>& t_list,
                                       double h, std::size_t replicates,
                                       std::uint64_t master_seed,
                                       double bias_allowance = 5e-3);

}  // namespace seedscale
