#pragma once

// Every numeric tolerance used by the library, in one place.
namespace seedscale::tol {

// Matrix construction: conservativity / idempotency checks.
inline constexpr double build = 1e-12;

// Stochasticity of transition-matrix rows.
inline constexpr double row_sum = 1e-10;
inline constexpr double entry_floor = -1e-12;

// Looser row-sum check for probability vectors fed to total_variation.
inline constexpr double prob_row_sum = 1e-8;

// Algebraic identities (Chapman-Kolmogorov, semigroup property).
inline constexpr double algebraic = 1e-8;

// Neglected Poisson tail mass in uniformization.
inline constexpr double expm_tail = 1e-12;

// Agreement between the two independent matrix-exponential routes.
inline constexpr double cross_method = 1e-9;

}  // namespace seedscale::tol
