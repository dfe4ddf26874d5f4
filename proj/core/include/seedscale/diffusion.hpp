#pragma once

#include <cstdint>
#include <vector>

#include "seedscale/rng.hpp"

namespace seedscale {

struct DiffusionState {
  double x = 0.0;  // active-island frequency, in [0,1]
  double y = 0.0;  // dormant-island frequency, in [0,1]
};

struct JumpState {
  int x = 0;       // active-island allele indicator, in {0,1}
  double y = 0.0;  // dormant-island frequency, in [0,1]
};

struct EmConfig {
  double h = 1e-3;                  // step size, model time
  double horizon = 1.0;
  std::vector<double> output_grid;  // record times, within [0, horizon]

  void validate() const;
};

/// One Euler-Maruyama step of the seed bank diffusion:
///   x' = x + c(y-x)h + sqrt(x(1-x)) sqrt(h) z,  y' = y + Kc(x-y)h,
/// both clamped to [0,1]. Clamp events are counted into *clamp_count.
DiffusionState em_step_seedbank(DiffusionState s, double c, double K, double h,
                                double z, std::size_t* clamp_count = nullptr);

/// Two-island variant: adds alpha' sqrt(y(1-y)) sqrt(h) z2 to the second
/// coordinate (independent z2); drift unchanged.
DiffusionState em_step_two_island(DiffusionState s, double c, double K,
                                  double alpha_prime, double h, double z1,
                                  double z2, std::size_t* clamp_count = nullptr);

struct Trajectory {
  std::vector<double> times;
  std::vector<DiffusionState> states;
  std::size_t clamp_events = 0;
};

/// EM trajectory of the seed bank diffusion on [0, config.horizon], recorded
/// at config.output_grid.
Trajectory simulate_seedbank(DiffusionState start, double c, double K,
                             const EmConfig& config, RngStream& rng);

/// The rescaled regime: runs the seed bank diffusion over model time [0, T/c]
/// and reports states at model times t/c for each grid time t in [0, T].
/// Rejects runs needing more than `step_budget` EM steps.
Trajectory simulate_rescaled(double c, double K, DiffusionState start, double T,
                             double h, const std::vector<double>& grid,
                             RngStream& rng,
                             std::uint64_t step_budget = 100000000ull);

/// Piecewise-deterministic realization of the limit jump process.
struct JumpTrajectory {
  double K = 1.0;
  double horizon = 0.0;
  std::vector<double> jump_times;      // strictly increasing
  std::vector<int> x_segments;         // x on each inter-jump segment
  std::vector<double> y_segment_start; // y at the start of each segment

  JumpState state_at(double t) const;  // closed exponential flow within segments
};

/// Exact sampling of the limit process: between jumps y follows
/// y(t) = x + (y0-x) e^{-Kt}; the integrated jump hazard is inverted
/// analytically, so there is no discretization error. (0,0) and (1,1) absorb.
/// Rejects start.x outside {0,1}.
JumpTrajectory sample_limit_jump(JumpState start, double K, double horizon,
                                 RngStream& rng);

struct HybridTrajectory {
  std::vector<double> times;
  std::vector<int> x;
  std::vector<double> y;
  std::vector<double> jump_times;
  std::size_t proposals = 0;  // thinning candidates drawn
  std::size_t accepts = 0;    // candidates accepted as jumps
  std::size_t clamp_events = 0;
};

/// Two-island limit: y advances by EM with drift K(x-y) and diffusion
/// sqrt(y(1-y)) (scaled by diffusion_scale); x jumps are sampled by thinning
/// with majorant hazard 1, accepting a candidate with probability equal to
/// the current hazard (y when x=0, 1-y when x=1).
HybridTrajectory sample_two_island_limit(JumpState start, double K,
                                         const EmConfig& config, RngStream& rng,
                                         double diffusion_scale = 1.0);

}  // namespace seedscale
