#include "seedscale/state_space.hpp"

#include <stdexcept>

namespace seedscale {

std::string to_label(BlockState s) {
  return std::to_string(s.active) + ":" + std::to_string(s.dormant);
}

StateSpace StateSpace::from_states(std::vector<BlockState> states) {
  StateSpace sp;
  sp.states_ = std::move(states);
  for (std::size_t i = 0; i < sp.states_.size(); ++i) {
    auto [it, inserted] = sp.index_.emplace(sp.states_[i], i);
    if (!inserted) {
      throw std::invalid_argument("StateSpace: duplicate state " +
                                  to_label(sp.states_[i]));
    }
  }
  return sp;
}

StateSpace StateSpace::square(int n0, int m0) {
  if (n0 < 0 || m0 < 0 || n0 + m0 < 1) {
    throw std::invalid_argument("StateSpace::square: need n0,m0 >= 0 and n0+m0 >= 1");
  }
  const int top = n0 + m0;
  std::vector<BlockState> states;
  states.reserve(static_cast<std::size_t>(top + 1) * (top + 1));
  for (int n = 0; n <= top; ++n) {
    for (int m = 0; m <= top; ++m) states.push_back({n, m});
  }
  return from_states(std::move(states));
}

StateSpace StateSpace::strip(int m_max) {
  if (m_max < 1) throw std::invalid_argument("StateSpace::strip: need m_max >= 1");
  std::vector<BlockState> states;
  states.reserve(2 * static_cast<std::size_t>(m_max + 1));
  for (int n = 0; n <= 1; ++n) {
    for (int m = 0; m <= m_max; ++m) states.push_back({n, m});
  }
  return from_states(std::move(states));
}

bool StateSpace::contains(BlockState s) const { return index_.count(s) != 0; }

std::size_t StateSpace::index(BlockState s) const {
  auto it = index_.find(s);
  if (it == index_.end()) {
    throw std::out_of_range("StateSpace: state " + to_label(s) + " not in space");
  }
  return it->second;
}

}  // namespace seedscale
