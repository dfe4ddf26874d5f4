#pragma once

#include "seedscale/matrices.hpp"

namespace seedscale {

/// e^{tQ} for a conservative Q by uniformization. The Poisson tail mass
/// neglected per factor is below tol::expm_tail; the result is row-stochastic.
/// Rejects t < 0.
TransitionMatrix expm_conservative(const RateMatrix& q, double t);

/// e^{tM} for an arbitrary square M by scaling-and-squaring with a Taylor
/// series kernel. Throws on overflow/NaN during squaring.
GeneralMatrix expm_general(const GeneralMatrix& m, double t);

}  // namespace seedscale
