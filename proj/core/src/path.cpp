#include "seedscale/path.hpp"

#include <algorithm>
#include <stdexcept>

namespace seedscale {

BlockState PathSample::state_at(double t) const {
  auto it = std::upper_bound(jump_times.begin(), jump_times.end(), t);
  return visited[static_cast<std::size_t>(it - jump_times.begin())];
}

double PathSample::occupation_time(BlockState s) const {
  double total = 0.0;
  double prev = 0.0;
  for (std::size_t k = 0; k < jump_times.size(); ++k) {
    if (visited[k] == s) total += jump_times[k] - prev;
    prev = jump_times[k];
  }
  if (visited.back() == s) total += horizon - prev;
  return total;
}

PathSample sample_path(const RateMatrix& q, BlockState start, double horizon,
                       RngStream& rng) {
  if (!q.space().contains(start)) {
    throw std::invalid_argument("sample_path: start state " + to_label(start) +
                                " outside the state space");
  }
  if (horizon < 0.0) throw std::invalid_argument("sample_path: horizon must be >= 0");

  PathSample path;
  path.horizon = horizon;
  path.visited.push_back(start);

  const auto& space = q.space();
  std::size_t current = space.index(start);
  double t = 0.0;
  while (true) {
    const double exit_rate = -q(current, current);
    if (exit_rate <= 0.0) break;  // absorbing
    t += rng.exponential(exit_rate);
    if (t > horizon) break;
    double u = rng.uniform() * exit_rate;
    std::size_t next = current;
    for (std::size_t j = 0; j < space.size(); ++j) {
      if (j == current) continue;
      u -= q(current, j);
      if (u <= 0.0) {
        next = j;
        break;
      }
    }
    if (next == current) continue;  // rounding fell off the row; redraw
    path.jump_times.push_back(t);
    path.visited.push_back(space.state(next));
    current = next;
  }
  return path;
}

Eigen::VectorXd empirical_marginal(const RateMatrix& q, BlockState start,
                                   double t, std::size_t replicates,
                                   std::uint64_t master_seed) {
  const auto& space = q.space();
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space.size()));
  for (std::size_t r = 0; r < replicates; ++r) {
    RngStream rng(master_seed, r);
    PathSample path = sample_path(q, start, t, rng);
    counts(static_cast<Eigen::Index>(space.index(path.state_at(t)))) += 1.0;
  }
  return counts / static_cast<double>(replicates);
}

}  // namespace seedscale
