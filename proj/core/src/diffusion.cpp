#include "seedscale/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace seedscale {

namespace {

double clamp_unit(double v, std::size_t* clamp_count) {
  if (v < 0.0 || v > 1.0) {
    if (clamp_count) ++*clamp_count;
    return std::clamp(v, 0.0, 1.0);
  }
  return v;
}

void check_em_inputs(DiffusionState s, double c, double K, double h) {
  if (!(c > 0.0) || !(K > 0.0)) {
    throw std::invalid_argument("em_step: c and K must be positive");
  }
  if (!(h > 0.0)) throw std::invalid_argument("em_step: h must be positive");
  if (s.x < 0.0 || s.x > 1.0 || s.y < 0.0 || s.y > 1.0) {
    throw std::invalid_argument("em_step: state outside the unit square");
  }
}

void check_grid(const EmConfig& config) {
  double prev = -1.0;
  for (double t : config.output_grid) {
    if (t < 0.0 || t > config.horizon + 1e-12) {
      throw std::invalid_argument("EmConfig: output grid time outside [0, horizon]");
    }
    if (t <= prev) {
      throw std::invalid_argument("EmConfig: output grid must be strictly increasing");
    }
    prev = t;
  }
}

}  // namespace

void EmConfig::validate() const {
  if (!(h > 0.0)) throw std::invalid_argument("EmConfig: h must be positive");
  if (!(horizon >= 0.0)) throw std::invalid_argument("EmConfig: horizon must be >= 0");
  check_grid(*this);
}

DiffusionState em_step_seedbank(DiffusionState s, double c, double K, double h,
                                double z, std::size_t* clamp_count) {
  check_em_inputs(s, c, K, h);
  const double diff = std::sqrt(std::max(0.0, s.x * (1.0 - s.x)));
  DiffusionState out;
  out.x = clamp_unit(s.x + c * (s.y - s.x) * h + diff * std::sqrt(h) * z, clamp_count);
  out.y = clamp_unit(s.y + K * c * (s.x - s.y) * h, clamp_count);
  return out;
}

DiffusionState em_step_two_island(DiffusionState s, double c, double K,
                                  double alpha_prime, double h, double z1,
                                  double z2, std::size_t* clamp_count) {
  check_em_inputs(s, c, K, h);
  if (!(alpha_prime >= 0.0)) {
    throw std::invalid_argument("em_step_two_island: alpha' must be >= 0");
  }
  const double sqrt_h = std::sqrt(h);
  const double diff_x = std::sqrt(std::max(0.0, s.x * (1.0 - s.x)));
  const double diff_y = std::sqrt(std::max(0.0, s.y * (1.0 - s.y)));
  DiffusionState out;
  out.x = clamp_unit(s.x + c * (s.y - s.x) * h + diff_x * sqrt_h * z1, clamp_count);
  out.y = clamp_unit(s.y + K * c * (s.x - s.y) * h + alpha_prime * diff_y * sqrt_h * z2,
                     clamp_count);
  return out;
}

Trajectory simulate_seedbank(DiffusionState start, double c, double K,
                             const EmConfig& config, RngStream& rng) {
  config.validate();
  Trajectory traj;
  DiffusionState s = start;
  double t = 0.0;
  std::size_t next_out = 0;
  auto flush = [&](double now) {
    while (next_out < config.output_grid.size() &&
           config.output_grid[next_out] <= now + 1e-12) {
      traj.times.push_back(config.output_grid[next_out]);
      traj.states.push_back(s);
      ++next_out;
    }
  };
  flush(t);
  while (t < config.horizon - 1e-12) {
    s = em_step_seedbank(s, c, K, config.h, rng.normal(), &traj.clamp_events);
    t += config.h;
    flush(t);
  }
  flush(config.horizon);
  return traj;
}

Trajectory simulate_rescaled(double c, double K, DiffusionState start, double T,
                             double h, const std::vector<double>& grid,
                             RngStream& rng, std::uint64_t step_budget) {
  if (!(c > 0.0)) throw std::invalid_argument("simulate_rescaled: c must be positive");
  if (!(T >= 0.0)) throw std::invalid_argument("simulate_rescaled: T must be >= 0");
  const double needed = T / (c * h);
  if (needed > static_cast<double>(step_budget)) {
    throw std::invalid_argument(
        "simulate_rescaled: " + std::to_string(needed) +
        " steps needed exceeds the budget; increase h or reduce T");
  }
  EmConfig config;
  config.h = h;
  config.horizon = T / c;
  config.output_grid.reserve(grid.size());
  for (double t : grid) config.output_grid.push_back(t / c);
  Trajectory traj = simulate_seedbank(start, c, K, config, rng);
  for (std::size_t i = 0; i < traj.times.size(); ++i) traj.times[i] = grid[i];
  return traj;
}

JumpState JumpTrajectory::state_at(double t) const {
  if (t < 0.0 || t > horizon + 1e-12) {
    throw std::invalid_argument("JumpTrajectory: time outside [0, horizon]");
  }
  // Segment i covers [start_i, jump_times[i]); the last runs to the horizon.
  std::size_t seg = 0;
  double seg_start = 0.0;
  while (seg < jump_times.size() && t >= jump_times[seg]) {
    seg_start = jump_times[seg];
    ++seg;
  }
  const double x = static_cast<double>(x_segments[seg]);
  const double y0 = y_segment_start[seg];
  JumpState out;
  out.x = x_segments[seg];
  out.y = x + (y0 - x) * std::exp(-K * (t - seg_start));
  return out;
}

JumpTrajectory sample_limit_jump(JumpState start, double K, double horizon,
                                 RngStream& rng) {
  if (start.x != 0 && start.x != 1) {
    throw std::invalid_argument("sample_limit_jump: x must be 0 or 1");
  }
  if (start.y < 0.0 || start.y > 1.0) {
    throw std::invalid_argument("sample_limit_jump: y must lie in [0,1]");
  }
  if (!(K > 0.0)) throw std::invalid_argument("sample_limit_jump: K must be positive");
  if (!(horizon >= 0.0)) {
    throw std::invalid_argument("sample_limit_jump: horizon must be >= 0");
  }
  JumpTrajectory traj;
  traj.K = K;
  traj.horizon = horizon;
  int x = start.x;
  double y0 = start.y;
  double t = 0.0;
  traj.x_segments.push_back(x);
  traj.y_segment_start.push_back(y0);
  while (true) {
    // Along the flow the jump hazard is |y(t) - x| = |y0 - x| e^{-Kt}; its
    // integral over [0, inf) is |y0 - x| / K, so the clock E jumps iff
    // E < |y0 - x| / K, at delta = -log(1 - K E / |y0 - x|) / K.
    const double gap = std::abs(y0 - static_cast<double>(x));
    if (gap == 0.0) break;  // (0,0) and (1,1) absorb
    const double e = rng.exponential(1.0);
    if (e >= gap / K) break;  // flow runs to the horizon without jumping
    const double delta = -std::log1p(-K * e / gap) / K;
    if (t + delta >= horizon) break;
    t += delta;
    y0 = static_cast<double>(x) + (y0 - static_cast<double>(x)) * std::exp(-K * delta);
    x = 1 - x;
    traj.jump_times.push_back(t);
    traj.x_segments.push_back(x);
    traj.y_segment_start.push_back(y0);
  }
  return traj;
}

HybridTrajectory sample_two_island_limit(JumpState start, double K,
                                         const EmConfig& config, RngStream& rng,
                                         double diffusion_scale) {
  if (start.x != 0 && start.x != 1) {
    throw std::invalid_argument("sample_two_island_limit: x must be 0 or 1");
  }
  if (start.y < 0.0 || start.y > 1.0) {
    throw std::invalid_argument("sample_two_island_limit: y must lie in [0,1]");
  }
  if (!(K > 0.0)) {
    throw std::invalid_argument("sample_two_island_limit: K must be positive");
  }
  if (!(diffusion_scale >= 0.0)) {
    throw std::invalid_argument("sample_two_island_limit: diffusion scale must be >= 0");
  }
  config.validate();

  HybridTrajectory traj;
  int x = start.x;
  double y = start.y;
  double t = 0.0;
  std::size_t next_out = 0;
  auto flush = [&](double now) {
    while (next_out < config.output_grid.size() &&
           config.output_grid[next_out] <= now + 1e-12) {
      traj.times.push_back(config.output_grid[next_out]);
      traj.x.push_back(x);
      traj.y.push_back(y);
      ++next_out;
    }
  };
  auto advance_y = [&](double dt) {
    if (dt <= 0.0) return;
    const double diff =
        diffusion_scale * std::sqrt(std::max(0.0, y * (1.0 - y)));
    double v = y + K * (static_cast<double>(x) - y) * dt +
               diff * std::sqrt(dt) * rng.normal();
    if (v < 0.0 || v > 1.0) {
      ++traj.clamp_events;
      v = std::clamp(v, 0.0, 1.0);
    }
    y = v;
  };

  // Thinning with majorant hazard 1: candidates arrive as a unit Poisson
  // stream; a candidate at time tau flips x with probability equal to the
  // hazard there (y when x = 0, 1 - y when x = 1).
  double next_candidate = rng.exponential(1.0);
  flush(t);
  while (t < config.horizon - 1e-12) {
    double step_end = std::min(t + config.h, config.horizon);
    if (next_candidate < step_end) {
      advance_y(next_candidate - t);
      t = next_candidate;
      ++traj.proposals;
      const double hazard = (x == 0) ? y : 1.0 - y;
      if (rng.uniform() < hazard) {
        ++traj.accepts;
        x = 1 - x;
        traj.jump_times.push_back(t);
      }
      next_candidate = t + rng.exponential(1.0);
      flush(t);
      continue;
    }
    advance_y(step_end - t);
    t = step_end;
    flush(t);
  }
  flush(config.horizon);
  return traj;
}

}  // namespace seedscale
