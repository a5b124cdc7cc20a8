#pragma once

#include "ottoforge/bath.hpp"
#include "ottoforge/types.hpp"

namespace ottoforge {

/// Transition rates between levels: gamma(n, m) is the rate of the jump from
/// level n to level m. Diagonal entries are zero. Built downhill-first, the
/// uphill direction derived from detailed balance, so the detailed-balance
/// residual vanishes to rounding.
struct RateMatrix {
  Matrix gamma;
};

/// Population-space generator of one (bath, control) pair.
///   full:    d x d matrix M with dp/dt = M p, columns summing to zero
///   reduced: (d-1) x (d-1) matrix G with dp_hat/dt = G (p_hat_eq - p_hat)
///            after eliminating p_1 = 1 - sum(p_hat)
///   gibbs:   equilibrium populations of the generating bath
struct PauliGenerator {
  Matrix full;
  Matrix reduced;
  Vector gibbs;

  int dimension() const { return static_cast<int>(gibbs.size()); }
};

/// Boltzmann populations exp(-beta e_n)/Z, computed with a max-shift.
Vector gibbs_populations(double beta, const Spectrum& spectrum);

RateMatrix build_rate_matrix(const Spectrum& spectrum, const BathModel& bath);

/// Generator for one leg. Handles every family, including fixed-rate (which
/// has no RateMatrix; its generator contracts uniformly toward gibbs).
PauliGenerator build_generator(const Spectrum& spectrum, const BathModel& bath);

PauliGenerator generator_from_rates(const RateMatrix& rates, const Vector& gibbs);

}  // namespace ottoforge
