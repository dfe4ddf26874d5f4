#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace seedscale {

/// A state (n, m): n active lineages, m dormant lineages.
struct BlockState {
  int active = 0;
  int dormant = 0;

  friend bool operator==(const BlockState&, const BlockState&) = default;
  friend auto operator<=>(const BlockState&, const BlockState&) = default;
};

std::string to_label(BlockState s);  // "n:m"

/// Ordered finite set of (n, m) states with a state <-> row-index bijection.
class StateSpace {
 public:
  /// {0,...,n0+m0}^2, the truncated space of the block-counting chains.
  static StateSpace square(int n0, int m0);

  /// {0,1} x {0,...,m_max}, the domain of the restricted limit chain.
  static StateSpace strip(int m_max);

  static StateSpace from_states(std::vector<BlockState> states);

  std::size_t size() const { return states_.size(); }
  const BlockState& state(std::size_t i) const { return states_[i]; }
  const std::vector<BlockState>& states() const { return states_; }

  bool contains(BlockState s) const;
  /// Throws std::out_of_range if s is not in the space.
  std::size_t index(BlockState s) const;

  std::string label(std::size_t i) const { return to_label(states_[i]); }

  friend bool operator==(const StateSpace& a, const StateSpace& b) {
    return a.states_ == b.states_;
  }

 private:
  std::vector<BlockState> states_;
  std::map<BlockState, std::size_t> index_;
};

}  // namespace seedscale
