#pragma once

#include <optional>

#include "seedscale/expm.hpp"
#include "seedscale/matrices.hpp"

namespace seedscale {

struct SeedbankParams {
  double c = 1.0;                          // migration rate, > 0
  double K = 1.0;                          // relative seed bank size, > 0
  std::optional<double> alpha_prime = {};  // second-island coalescence rate, >= 0

  void validate() const;
};

struct InitialBlocks {
  int n0 = 1;  // active lineages
  int m0 = 0;  // dormant lineages

  void validate() const;  // n0, m0 >= 0 and n0 + m0 >= 1
  int total() const { return n0 + m0; }
};

/// Block-counting rates of the seed bank coalescent on E_{(n0,m0)}:
/// binom(n,2) to (n-1,m), c*n to (n-1,m+1), c*K*m to (n+1,m-1).
/// Transitions whose target leaves the truncated space are dropped and the
/// diagonal holds minus the sum of retained rates; this only affects states
/// with n+m > n0+m0, which are unreachable since n+m never increases.
RateMatrix blockcounting_q(const SeedbankParams& params, InitialBlocks init);

/// Structured-coalescent variant: blockcounting_q plus alpha' * binom(m,2)
/// from (n,m) to (n,m-1). Requires params.alpha_prime.
RateMatrix structured_q(const SeedbankParams& params, InitialBlocks init);

/// The instantaneous-coalescence projection: row (n,m) has its single 1 at
/// (min(n,1), m).
GeneralMatrix projection_p(InitialBlocks init);

/// Limit of the slow-scale decomposition part: n at (n-1,m+1), K*m at
/// (n+1,m-1), diagonal minus the retained sum.
GeneralMatrix limit_b(InitialBlocks init, double K);

/// Generator of the ancient ancestral lines process, built in the
/// PBP-consistent form: for rows with n >= 1 the entries live on the
/// projected strip, K*m at (1,m-1) (wake-and-coalesce, via (2,m-1)),
/// 1 at (0,m+1) (dormancy), balance at (1,m). Rows with n = 0: K*m at
/// (1,m-1), balance at (0,m). Satisfies projection_p * limit_b * projection_p
/// == ancient_g exactly, including truncation-boundary rows.
GeneralMatrix ancient_g(InitialBlocks init, double K);

/// Imbalanced-island variant with second-island coalescence binom(m,2) kept
/// on the slow scale; same PBP-consistent construction.
GeneralMatrix imbalanced_ghat(InitialBlocks init, double K);

/// Restriction of the limit generator to {0,1} x {0,...,m_max}, a genuine
/// conservative Q-matrix. The dormancy transition out of row (1,m_max) is
/// excluded by truncation (exit rate reduced accordingly); *boundary_truncated
/// reports whether that happened. Truncation is exact when m_max >= n0+m0 of
/// the intended start.
RateMatrix restricted_gbar(double K, int m_max, bool* boundary_truncated = nullptr);

/// Pair (P, G) with evaluation t -> P e^{tG}.
class DegenerateSemigroup {
 public:
  /// Validates P*P = P exactly, each P row a single 1, and P G = G P = G
  /// within tol::build.
  DegenerateSemigroup(GeneralMatrix p, GeneralMatrix g);

  /// The seed bank limit: P from projection_p, G from ancient_g.
  static DegenerateSemigroup ancient(InitialBlocks init, double K);

  /// Imbalanced-island limit: same P, G from imbalanced_ghat.
  static DegenerateSemigroup imbalanced(InitialBlocks init, double K);

  const StateSpace& space() const { return p_.space(); }
  const GeneralMatrix& p() const { return p_; }
  const GeneralMatrix& g() const { return g_; }

 private:
  GeneralMatrix p_;
  GeneralMatrix g_;
};

/// Pi(t) = P e^{tG}; Pi(0) is the identity (the semigroup is discontinuous at
/// 0 and the evaluator takes t literally). Computed through the conservative
/// exponential of the P-invariant strip restriction of G. Rejects t < 0.
TransitionMatrix ancient_semigroup(const DegenerateSemigroup& sg, double t);

/// One-step decomposition Pi_k = A_k + B_k / b_k with b_k = c_k^{-3}.
struct PrelimitDecomposition {
  TransitionMatrix a_kappa;   // coalescence-only part, exact entries
  GeneralMatrix b_kappa;      // b_k * (Pi_k - A_k)
  TransitionMatrix one_step;  // Pi_k = e^{Q c_k^2}, exact
  double b_scale = 0.0;       // b_k
  double a_scale = 0.0;       // a_k = c_k^{-2}
};

/// A_k has binom(n,2) c^2 at (n-1,m) and 1 - binom(n,2) c^2 on the diagonal;
/// B_k is defined from the exact one-step matrix so the decomposition identity
/// holds exactly. Rejects c_kappa outside (0, 1].
PrelimitDecomposition prelimit_decomposition(double c_kappa, double K,
                                             InitialBlocks init);

/// Structured-coalescent decomposition with alpha' = c_kappa (the imbalanced
/// island scaling); A_k is unchanged.
PrelimitDecomposition prelimit_decomposition_imbalanced(double c_kappa, double K,
                                                        InitialBlocks init);

}  // namespace seedscale
