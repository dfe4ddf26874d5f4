#include "seedscale/seedbank.hpp"

#include <cmath>
#include <stdexcept>

#include "seedscale/tolerances.hpp"

namespace seedscale {

namespace {

double binom2(int n) { return n >= 2 ? 0.5 * n * (n - 1) : 0.0; }

// Adds `rate` from `from` to `to` when the target is inside the space, and
// keeps the diagonal slot at minus the retained sum (conservative truncation).
struct RateAccumulator {
  const StateSpace& space;
  Eigen::MatrixXd& m;

  void add(BlockState from, BlockState to, double rate, BlockState diag_slot) {
    if (rate == 0.0) return;
    if (!space.contains(to)) return;
    const auto i = space.index(from);
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(space.index(to))) += rate;
    m(static_cast<Eigen::Index>(i),
      static_cast<Eigen::Index>(space.index(diag_slot))) -= rate;
  }
};

RateMatrix build_q(const SeedbankParams& params, InitialBlocks init,
                   bool with_island_coalescence) {
  params.validate();
  init.validate();
  StateSpace space = StateSpace::square(init.n0, init.m0);
  const auto n_states = static_cast<Eigen::Index>(space.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_states, n_states);
  RateAccumulator acc{space, m};
  const double alpha_prime = with_island_coalescence ? *params.alpha_prime : 0.0;
  for (const BlockState& s : space.states()) {
    const int n = s.active, mm = s.dormant;
    acc.add(s, {n - 1, mm}, binom2(n), s);                    // coalescence
    acc.add(s, {n - 1, mm + 1}, params.c * n, s);             // dormancy
    acc.add(s, {n + 1, mm - 1}, params.c * params.K * mm, s); // resuscitation
    if (with_island_coalescence) {
      acc.add(s, {n, mm - 1}, alpha_prime * binom2(mm), s);   // island-2 coalescence
    }
  }
  return {std::move(space), std::move(m)};
}

}  // namespace

void SeedbankParams::validate() const {
  if (!(c > 0.0)) throw std::invalid_argument("SeedbankParams: c must be positive");
  if (!(K > 0.0)) throw std::invalid_argument("SeedbankParams: K must be positive");
  if (alpha_prime && *alpha_prime < 0.0) {
    throw std::invalid_argument("SeedbankParams: alpha_prime must be >= 0");
  }
}

void InitialBlocks::validate() const {
  if (n0 < 0 || m0 < 0 || n0 + m0 < 1) {
    throw std::invalid_argument("InitialBlocks: need n0,m0 >= 0 and n0+m0 >= 1");
  }
}

RateMatrix blockcounting_q(const SeedbankParams& params, InitialBlocks init) {
  return build_q(params, init, false);
}

RateMatrix structured_q(const SeedbankParams& params, InitialBlocks init) {
  if (!params.alpha_prime) {
    throw std::invalid_argument("structured_q: alpha_prime is required");
  }
  return build_q(params, init, true);
}

GeneralMatrix projection_p(InitialBlocks init) {
  init.validate();
  StateSpace space = StateSpace::square(init.n0, init.m0);
  const auto n_states = static_cast<Eigen::Index>(space.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_states, n_states);
  for (const BlockState& s : space.states()) {
    const auto i = static_cast<Eigen::Index>(space.index(s));
    const auto j = static_cast<Eigen::Index>(
        space.index({std::min(s.active, 1), s.dormant}));
    m(i, j) = 1.0;
  }
  return {std::move(space), std::move(m)};
}

GeneralMatrix limit_b(InitialBlocks init, double K) {
  init.validate();
  if (!(K > 0.0)) throw std::invalid_argument("limit_b: K must be positive");
  StateSpace space = StateSpace::square(init.n0, init.m0);
  const auto n_states = static_cast<Eigen::Index>(space.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_states, n_states);
  RateAccumulator acc{space, m};
  for (const BlockState& s : space.states()) {
    const int n = s.active, mm = s.dormant;
    acc.add(s, {n - 1, mm + 1}, static_cast<double>(n), s);  // dormancy
    acc.add(s, {n + 1, mm - 1}, K * mm, s);                  // resuscitation
  }
  return {std::move(space), std::move(m)};
}

namespace {

GeneralMatrix build_limit_generator(InitialBlocks init, double K,
                                    bool with_island_coalescence) {
  init.validate();
  if (!(K > 0.0)) throw std::invalid_argument("limit generator: K must be positive");
  StateSpace space = StateSpace::square(init.n0, init.m0);
  const auto n_states = static_cast<Eigen::Index>(space.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_states, n_states);
  RateAccumulator acc{space, m};
  for (const BlockState& s : space.states()) {
    const int n = s.active, mm = s.dormant;
    const BlockState slot{std::min(n, 1), mm};
    if (n == 0) {
      acc.add(s, {1, mm - 1}, K * mm, slot);
      if (with_island_coalescence) acc.add(s, {0, mm - 1}, binom2(mm), slot);
    } else {
      // Wake-and-coalesce passes through (2, m-1); dropped with it outside.
      if (mm >= 1 && space.contains({2, mm - 1})) {
        acc.add(s, {1, mm - 1}, K * mm, slot);
      }
      if (with_island_coalescence) acc.add(s, {1, mm - 1}, binom2(mm), slot);
      acc.add(s, {0, mm + 1}, 1.0, slot);
    }
  }
  return {std::move(space), std::move(m)};
}

}  // namespace

GeneralMatrix ancient_g(InitialBlocks init, double K) {
  return build_limit_generator(init, K, false);
}

GeneralMatrix imbalanced_ghat(InitialBlocks init, double K) {
  return build_limit_generator(init, K, true);
}

RateMatrix restricted_gbar(double K, int m_max, bool* boundary_truncated) {
  if (!(K > 0.0)) throw std::invalid_argument("restricted_gbar: K must be positive");
  if (m_max < 1) throw std::invalid_argument("restricted_gbar: m_max must be >= 1");
  StateSpace space = StateSpace::strip(m_max);
  const auto n_states = static_cast<Eigen::Index>(space.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_states, n_states);
  RateAccumulator acc{space, m};
  bool truncated = false;
  for (const BlockState& s : space.states()) {
    const int n = s.active, mm = s.dormant;
    acc.add(s, {1, mm - 1}, K * mm, s);
    if (n == 1) {
      if (mm + 1 <= m_max) {
        acc.add(s, {0, mm + 1}, 1.0, s);
      } else {
        truncated = true;
      }
    }
  }
  if (boundary_truncated) *boundary_truncated = truncated;
  return {std::move(space), std::move(m)};
}

DegenerateSemigroup::DegenerateSemigroup(GeneralMatrix p, GeneralMatrix g)
    : p_(std::move(p)), g_(std::move(g)) {
  if (!(p_.space() == g_.space())) {
    throw std::invalid_argument("DegenerateSemigroup: P and G live on different spaces");
  }
  const auto n = static_cast<Eigen::Index>(p_.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    int ones = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double v = p_(i, j);
      if (v == 1.0) {
        ++ones;
      } else if (v != 0.0) {
        throw std::invalid_argument("DegenerateSemigroup: P entries must be 0 or 1");
      }
    }
    if (ones != 1) {
      throw std::invalid_argument("DegenerateSemigroup: P row " +
                                  p_.space().label(i) + " must have exactly one 1");
    }
  }
  const Eigen::MatrixXd& pm = p_.entries();
  const Eigen::MatrixXd& gm = g_.entries();
  if ((pm * pm - pm).cwiseAbs().maxCoeff() != 0.0) {
    throw std::invalid_argument("DegenerateSemigroup: P*P != P");
  }
  if (matrix_norm(Eigen::MatrixXd(pm * gm - gm)) > tol::build ||
      matrix_norm(Eigen::MatrixXd(gm * pm - gm)) > tol::build) {
    throw std::invalid_argument("DegenerateSemigroup: PG = GP = G violated");
  }
}

DegenerateSemigroup DegenerateSemigroup::ancient(InitialBlocks init, double K) {
  return {projection_p(init), ancient_g(init, K)};
}

DegenerateSemigroup DegenerateSemigroup::imbalanced(InitialBlocks init, double K) {
  return {projection_p(init), imbalanced_ghat(init, K)};
}

TransitionMatrix ancient_semigroup(const DegenerateSemigroup& sg, double t) {
  if (t < 0.0) throw std::invalid_argument("ancient_semigroup: t must be >= 0");
  if (t == 0.0) return TransitionMatrix::identity(sg.space());

  // The {0,1} x {0..m_max} strip is invariant under G and its restriction is
  // conservative, so Pe^{tG} reduces to a genuine Markov semigroup there.
  const StateSpace& space = sg.space();
  int m_max = 0;
  for (const BlockState& s : space.states()) m_max = std::max(m_max, s.dormant);
  StateSpace strip = StateSpace::strip(m_max);
  const auto strip_n = static_cast<Eigen::Index>(strip.size());
  Eigen::MatrixXd restricted(strip_n, strip_n);
  for (std::size_t i = 0; i < strip.size(); ++i) {
    for (std::size_t j = 0; j < strip.size(); ++j) {
      restricted(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          sg.g().at(strip.state(i), strip.state(j));
    }
  }
  TransitionMatrix strip_exp =
      expm_conservative(RateMatrix(strip, std::move(restricted)), t);

  const auto n = static_cast<Eigen::Index>(space.size());
  Eigen::MatrixXd result = Eigen::MatrixXd::Zero(n, n);
  for (const BlockState& s : space.states()) {
    const auto i = static_cast<Eigen::Index>(space.index(s));
    const BlockState projected{std::min(s.active, 1), s.dormant};
    for (std::size_t j = 0; j < strip.size(); ++j) {
      result(i, static_cast<Eigen::Index>(space.index(strip.state(j)))) =
          strip_exp.at(projected, strip.state(j));
    }
  }
  return {space, std::move(result)};
}

namespace {

PrelimitDecomposition make_decomposition(double c_kappa, double K,
                                         InitialBlocks init, bool imbalanced) {
  if (!(c_kappa > 0.0) || c_kappa > 1.0) {
    throw std::invalid_argument("prelimit_decomposition: c_kappa must be in (0, 1]");
  }
  init.validate();
  SeedbankParams params{c_kappa, K,
                        imbalanced ? std::optional<double>(c_kappa) : std::nullopt};
  RateMatrix q = imbalanced ? structured_q(params, init)
                            : blockcounting_q(params, init);
  const double a_scale = 1.0 / (c_kappa * c_kappa);
  const double b_scale = 1.0 / (c_kappa * c_kappa * c_kappa);

  TransitionMatrix one_step = expm_conservative(q, c_kappa * c_kappa);

  const StateSpace& space = q.space();
  const auto n_states = static_cast<Eigen::Index>(space.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n_states, n_states);
  for (const BlockState& s : space.states()) {
    const double coal = binom2(s.active) * c_kappa * c_kappa;
    if (coal == 0.0) continue;
    const auto i = static_cast<Eigen::Index>(space.index(s));
    a(i, static_cast<Eigen::Index>(space.index({s.active - 1, s.dormant}))) = coal;
    a(i, i) = 1.0 - coal;
  }
  TransitionMatrix a_kappa(space, std::move(a));
  Eigen::MatrixXd b = b_scale * (one_step.entries() - a_kappa.entries());
  return {std::move(a_kappa), GeneralMatrix(space, std::move(b)),
          std::move(one_step), b_scale, a_scale};
}

}  // namespace

PrelimitDecomposition prelimit_decomposition(double c_kappa, double K,
                                             InitialBlocks init) {
  return make_decomposition(c_kappa, K, init, false);
}

PrelimitDecomposition prelimit_decomposition_imbalanced(double c_kappa, double K,
                                                        InitialBlocks init) {
  return make_decomposition(c_kappa, K, init, true);
}

}  // namespace seedscale
