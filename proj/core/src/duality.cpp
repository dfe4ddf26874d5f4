#include "seedscale/duality.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "seedscale/expm.hpp"
#include "seedscale/path.hpp"
#include "seedscale/tolerances.hpp"

namespace seedscale {

namespace {

// Absolute floor under the MC tolerance so exactly-equal cells survive the
// expm row-sum slack.
constexpr double kExactSlack = 1e-9;

struct Welford {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t count = 0;

  void add(double v) {
    sum += v;
    sum_sq += v * v;
    ++count;
  }
  double mean() const { return sum / static_cast<double>(count); }
  double standard_error() const {
    if (count < 2) return 0.0;
    const double n = static_cast<double>(count);
    double var = (sum_sq - sum * sum / n) / (n - 1.0);
    return std::sqrt(std::max(0.0, var) / n);
  }
};

}  // namespace

double ipow(double x, int n) {
  if (n < 0) throw std::invalid_argument("ipow: exponent must be >= 0");
  double result = 1.0;
  for (int i = 0; i < n; ++i) result *= x;
  return result;
}

void MomentGrid::validate() const {
  if (pairs.empty()) throw std::invalid_argument("MomentGrid: no exponent pairs");
  if (points.empty()) throw std::invalid_argument("MomentGrid: no (x,y) points");
  if (times.empty()) throw std::invalid_argument("MomentGrid: no times");
  for (auto [n, m] : pairs) {
    if (n < 0 || m < 0 || n > max_exponent || m > max_exponent) {
      throw std::invalid_argument("MomentGrid: exponents must lie in [0, max]");
    }
  }
  for (auto [x, y] : points) {
    if (x < 0.0 || x > 1.0 || y < 0.0 || y > 1.0) {
      throw std::invalid_argument("MomentGrid: points must lie in [0,1]^2");
    }
  }
  double prev = 0.0;
  for (double t : times) {
    if (!(t > prev)) {
      throw std::invalid_argument("MomentGrid: times must be positive and increasing");
    }
    prev = t;
  }
}

double chain_moment_exact(const TransitionMatrix& p_t, BlockState start,
                          double x, double y) {
  const auto row = p_t.row(start);
  const auto& states = p_t.space().states();
  double total = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    total += ipow(x, states[i].active) * ipow(y, states[i].dormant) * row(static_cast<Eigen::Index>(i));
  }
  return total;
}

std::pair<double, double> diffusion_moment_mc(
    const std::function<DiffusionState(RngStream&)>& endpoint, int n, int m,
    std::size_t replicates, std::uint64_t master_seed) {
  if (replicates < 100) {
    throw std::invalid_argument("diffusion_moment_mc: need at least 100 replicates");
  }
  Welford acc;
  for (std::size_t r = 0; r < replicates; ++r) {
    RngStream rng(master_seed, r);
    const DiffusionState s = endpoint(rng);
    acc.add(ipow(s.x, n) * ipow(s.y, m));
  }
  return {acc.mean(), acc.standard_error()};
}

RateMatrix perturb_rate(const RateMatrix& q, BlockState from, BlockState to,
                        double factor) {
  if (from == to) throw std::invalid_argument("perturb_rate: from == to");
  const auto i = static_cast<Eigen::Index>(q.space().index(from));
  const auto j = static_cast<Eigen::Index>(q.space().index(to));
  Eigen::MatrixXd m = q.entries();
  if (m(i, j) == 0.0) {
    throw std::invalid_argument("perturb_rate: rate " + to_label(from) + " -> " +
                                to_label(to) + " is zero");
  }
  m(i, j) *= factor;
  m(i, i) = 0.0;
  m(i, i) = -m.row(i).sum();
  return {q.space(), std::move(m)};
}

DualityReport verify_prelimit_duality(const RateMatrix& q, double c, double K,
                                      const MomentGrid& grid, double h,
                                      std::size_t replicates,
                                      std::uint64_t master_seed,
                                      double bias_allowance) {
  grid.validate();
  if (!(h > 0.0)) throw std::invalid_argument("verify_prelimit_duality: h <= 0");
  for (auto [n, m] : grid.pairs) {
    if (!q.space().contains({n, m})) {
      throw std::invalid_argument("verify_prelimit_duality: pair " +
                                  to_label({n, m}) + " outside the chain space");
    }
  }

  std::vector<TransitionMatrix> p_t;
  p_t.reserve(grid.times.size());
  for (double t : grid.times) p_t.push_back(expm_conservative(q, t));

  // stats[point][pair][time]; one EM trajectory per (point, replicate) shared
  // across all exponent pairs.
  std::vector<std::vector<std::vector<Welford>>> stats(
      grid.points.size(),
      std::vector<std::vector<Welford>>(
          grid.pairs.size(), std::vector<Welford>(grid.times.size())));
  EmConfig config;
  config.h = h;
  config.horizon = grid.times.back();
  config.output_grid = grid.times;
  for (std::size_t pi = 0; pi < grid.points.size(); ++pi) {
    const auto [x0, y0] = grid.points[pi];
    for (std::size_t r = 0; r < replicates; ++r) {
      RngStream rng(master_seed, pi * replicates + r);
      Trajectory traj = simulate_seedbank({x0, y0}, c, K, config, rng);
      for (std::size_t ti = 0; ti < grid.times.size(); ++ti) {
        const DiffusionState s = traj.states[ti];
        for (std::size_t gi = 0; gi < grid.pairs.size(); ++gi) {
          stats[pi][gi][ti].add(ipow(s.x, grid.pairs[gi].first) *
                                ipow(s.y, grid.pairs[gi].second));
        }
      }
    }
  }

  DualityReport report;
  report.bias_allowance = bias_allowance;
  report.all_pass = true;
  for (std::size_t gi = 0; gi < grid.pairs.size(); ++gi) {
    for (std::size_t pi = 0; pi < grid.points.size(); ++pi) {
      for (std::size_t ti = 0; ti < grid.times.size(); ++ti) {
        DualityCell cell;
        cell.n = grid.pairs[gi].first;
        cell.m = grid.pairs[gi].second;
        cell.x = grid.points[pi].first;
        cell.y = grid.points[pi].second;
        cell.t = grid.times[ti];
        cell.chain_exact =
            chain_moment_exact(p_t[ti], {cell.n, cell.m}, cell.x, cell.y);
        const Welford& acc = stats[pi][gi][ti];
        cell.diffusion_mc_mean = acc.mean();
        cell.mc_sigma = acc.standard_error();
        cell.pass = std::abs(cell.chain_exact - cell.diffusion_mc_mean) <=
                    3.0 * cell.mc_sigma + bias_allowance + kExactSlack;
        if (!cell.pass) report.all_pass = false;
        report.cells.push_back(cell);
      }
    }
  }
  return report;
}

DualityReport verify_limit_duality(double K, const MomentGrid& grid,
                                   std::size_t replicates,
                                   std::uint64_t master_seed) {
  grid.validate();
  if (!(K > 0.0)) throw std::invalid_argument("verify_limit_duality: K <= 0");
  int m_max = 0;
  for (auto [n, m] : grid.pairs) {
    if (n > 1) {
      throw std::invalid_argument(
          "verify_limit_duality: exponent pairs must have n in {0,1}");
    }
    m_max = std::max(m_max, n + m);
  }
  for (auto [x, y] : grid.points) {
    if (x != 0.0 && x != 1.0) {
      throw std::invalid_argument("verify_limit_duality: points need x in {0,1}");
    }
    (void)y;
  }

  // The strip {0,1} x {0..n+m} is exact for a chain started at (n,m): the
  // lineage total never increases.
  RateMatrix gbar = restricted_gbar(K, m_max);
  std::vector<TransitionMatrix> p_t;
  p_t.reserve(grid.times.size());
  for (double t : grid.times) p_t.push_back(expm_conservative(gbar, t));

  std::vector<std::vector<std::vector<Welford>>> stats(
      grid.points.size(),
      std::vector<std::vector<Welford>>(
          grid.pairs.size(), std::vector<Welford>(grid.times.size())));
  for (std::size_t pi = 0; pi < grid.points.size(); ++pi) {
    const auto [x0, y0] = grid.points[pi];
    JumpState start{static_cast<int>(x0), y0};
    for (std::size_t r = 0; r < replicates; ++r) {
      RngStream rng(master_seed, pi * replicates + r);
      JumpTrajectory traj =
          sample_limit_jump(start, K, grid.times.back(), rng);
      for (std::size_t ti = 0; ti < grid.times.size(); ++ti) {
        const JumpState s = traj.state_at(grid.times[ti]);
        for (std::size_t gi = 0; gi < grid.pairs.size(); ++gi) {
          stats[pi][gi][ti].add(ipow(static_cast<double>(s.x), grid.pairs[gi].first) *
                                ipow(s.y, grid.pairs[gi].second));
        }
      }
    }
  }

  DualityReport report;
  report.bias_allowance = 0.0;  // the sampler has no discretization error
  report.all_pass = true;
  for (std::size_t gi = 0; gi < grid.pairs.size(); ++gi) {
    for (std::size_t pi = 0; pi < grid.points.size(); ++pi) {
      for (std::size_t ti = 0; ti < grid.times.size(); ++ti) {
        DualityCell cell;
        cell.n = grid.pairs[gi].first;
        cell.m = grid.pairs[gi].second;
        cell.x = grid.points[pi].first;
        cell.y = grid.points[pi].second;
        cell.t = grid.times[ti];
        cell.chain_exact =
            chain_moment_exact(p_t[ti], {cell.n, cell.m}, cell.x, cell.y);
        const Welford& acc = stats[pi][gi][ti];
        cell.diffusion_mc_mean = acc.mean();
        cell.mc_sigma = acc.standard_error();
        cell.pass = std::abs(cell.chain_exact - cell.diffusion_mc_mean) <=
                    3.0 * cell.mc_sigma + kExactSlack;
        if (!cell.pass) report.all_pass = false;
        report.cells.push_back(cell);
      }
    }
  }
  return report;
}

ConvergenceReport chain_convergence_tv(const std::vector<double>& c_list,
                                       double K, InitialBlocks start,
                                       const std::vector<double>& t_list) {
  if (c_list.empty() || t_list.empty()) {
    throw std::invalid_argument("chain_convergence_tv: empty c or t list");
  }
  for (std::size_t i = 0; i < c_list.size(); ++i) {
    if (!(c_list[i] > 0.0) || c_list[i] > 0.5) {
      throw std::invalid_argument(
          "chain_convergence_tv: c values must lie in (0, 0.5]");
    }
    if (i > 0 && !(c_list[i] < c_list[i - 1])) {
      throw std::invalid_argument("chain_convergence_tv: c values must decrease");
    }
  }
  start.validate();

  const DegenerateSemigroup limit = DegenerateSemigroup::ancient(start, K);
  const BlockState from{start.n0, start.m0};
  const auto n = static_cast<Eigen::Index>(limit.space().size());

  ConvergenceReport report;
  report.marginal_monotone = true;
  report.two_time_monotone = true;
  report.final_tv = 0.0;

  std::vector<Eigen::VectorXd> limit_rows;
  for (double t : t_list) {
    limit_rows.push_back(ancient_semigroup(limit, t).row(from));
  }
  const double t1 = 0.5, t2 = 1.5;
  const TransitionMatrix limit_pi1 = ancient_semigroup(limit, t1);
  const TransitionMatrix limit_pi2 = ancient_semigroup(limit, t2 - t1);

  std::vector<std::vector<double>> tv_by_t(t_list.size());
  for (double c : c_list) {
    RateMatrix q = blockcounting_q({c, K, {}}, start);
    for (std::size_t ti = 0; ti < t_list.size(); ++ti) {
      TransitionMatrix pre = expm_conservative(q, t_list[ti] / c);
      const double tv =
          total_variation(q.space(), pre.row(from), limit_rows[ti]);
      report.records.push_back({c, t_list[ti], tv});
      tv_by_t[ti].push_back(tv);
    }
    // Two-time joint laws by Markov composition on both sides.
    TransitionMatrix pre1 = expm_conservative(q, t1 / c);
    TransitionMatrix pre2 = expm_conservative(q, (t2 - t1) / c);
    const Eigen::VectorXd row_pre = pre1.row(from);
    const Eigen::VectorXd row_lim = limit_pi1.row(from);
    double l1 = 0.0;
    for (Eigen::Index e1 = 0; e1 < n; ++e1) {
      for (Eigen::Index e2 = 0; e2 < n; ++e2) {
        l1 += std::abs(row_pre(e1) * pre2.entries()(e1, e2) -
                       row_lim(e1) * limit_pi2.entries()(e1, e2));
      }
    }
    report.two_time.push_back({c, t2, 0.5 * l1});
  }

  for (const auto& seq : tv_by_t) {
    for (std::size_t i = 1; i < seq.size(); ++i) {
      if (!(seq[i] < seq[i - 1])) report.marginal_monotone = false;
    }
    report.final_tv = std::max(report.final_tv, seq.back());
  }
  for (std::size_t i = 1; i < report.two_time.size(); ++i) {
    if (!(report.two_time[i].tv < report.two_time[i - 1].tv)) {
      report.two_time_monotone = false;
    }
  }
  return report;
}

SparkReport spark_statistic(double c, double K, double horizon,
                            std::size_t replicates, std::uint64_t master_seed) {
  if (!(c > 0.0) || !(K > 0.0)) {
    throw std::invalid_argument("spark_statistic: c and K must be positive");
  }
  if (!(horizon > 0.0)) {
    throw std::invalid_argument("spark_statistic: horizon must be positive");
  }
  if (replicates == 0) {
    throw std::invalid_argument("spark_statistic: need replicates");
  }
  const InitialBlocks init{1, 1};
  RateMatrix q = blockcounting_q({c, K, {}}, init);
  const BlockState start{1, 1};
  const BlockState spark{2, 0};
  const BlockState after{1, 0};
  const double model_horizon = horizon / c;

  double occupation_sum = 0.0;
  double excursion_sum = 0.0;
  for (std::size_t r = 0; r < replicates; ++r) {
    RngStream rng(master_seed, r);
    PathSample path = sample_path(q, start, model_horizon, rng);
    occupation_sum += path.occupation_time(spark) / model_horizon;
    for (std::size_t i = 0; i + 2 < path.visited.size(); ++i) {
      if (path.visited[i] == start && path.visited[i + 1] == spark &&
          path.visited[i + 2] == after) {
        excursion_sum += 1.0;
      }
    }
  }
  SparkReport report;
  report.c = c;
  report.replicates = replicates;
  report.occupation_fraction = occupation_sum / static_cast<double>(replicates);
  report.excursions_per_path = excursion_sum / static_cast<double>(replicates);
  return report;
}

FixationReport fixation_check_limit(JumpState start, double K,
                                    const std::vector<double>& t_list,
                                    std::size_t replicates,
                                    std::uint64_t master_seed) {
  if (t_list.empty()) throw std::invalid_argument("fixation_check_limit: no times");
  FixationReport report;
  report.conserved_value = (K * static_cast<double>(start.x) + start.y) / (K + 1.0);
  std::vector<Welford> acc(t_list.size());
  const double horizon = *std::max_element(t_list.begin(), t_list.end());
  for (std::size_t r = 0; r < replicates; ++r) {
    RngStream rng(master_seed, r);
    JumpTrajectory traj = sample_limit_jump(start, K, horizon, rng);
    for (std::size_t ti = 0; ti < t_list.size(); ++ti) {
      const JumpState s = traj.state_at(t_list[ti]);
      acc[ti].add((K * static_cast<double>(s.x) + s.y) / (K + 1.0));
    }
  }
  report.all_pass = true;
  for (std::size_t ti = 0; ti < t_list.size(); ++ti) {
    FixationRecord rec;
    rec.t = t_list[ti];
    rec.mean = acc[ti].mean();
    rec.sigma = acc[ti].standard_error();
    rec.pass = std::abs(rec.mean - report.conserved_value) <=
               3.0 * rec.sigma + 1e-12;
    if (!rec.pass) report.all_pass = false;
    report.records.push_back(rec);
  }
  return report;
}

FixationReport fixation_check_prelimit(DiffusionState start, double c, double K,
                                       const std::vector<double>& t_list,
                                       double h, std::size_t replicates,
                                       std::uint64_t master_seed,
                                       double bias_allowance) {
  if (t_list.empty()) {
    throw std::invalid_argument("fixation_check_prelimit: no times");
  }
  FixationReport report;
  report.conserved_value = (K * start.x + start.y) / (K + 1.0);
  EmConfig config;
  config.h = h;
  config.horizon = *std::max_element(t_list.begin(), t_list.end());
  config.output_grid = t_list;
  std::vector<Welford> acc(t_list.size());
  for (std::size_t r = 0; r < replicates; ++r) {
    RngStream rng(master_seed, r);
    Trajectory traj = simulate_seedbank(start, c, K, config, rng);
    for (std::size_t ti = 0; ti < t_list.size(); ++ti) {
      acc[ti].add((K * traj.states[ti].x + traj.states[ti].y) / (K + 1.0));
    }
  }
  report.all_pass = true;
  for (std::size_t ti = 0; ti < t_list.size(); ++ti) {
    FixationRecord rec;
    rec.t = t_list[ti];
    rec.mean = acc[ti].mean();
    rec.sigma = acc[ti].standard_error();
    rec.pass = std::abs(rec.mean - report.conserved_value) <=
               3.0 * rec.sigma + bias_allowance + 1e-12;
    if (!rec.pass) report.all_pass = false;
    report.records.push_back(rec);
  }
  return report;
}

}  // namespace seedscale
