#pragma once

#include <vector>

#include "ottoforge/model.hpp"
#include "ottoforge/types.hpp"

namespace ottoforge {

/// Zeroth-order limit-cycle populations in the fast-driving regime.
struct FastSteadyState {
  Vector p0;
  double residual = 0.0;  // || sum_j mu_j G_j (p_hat_eq_j - p_hat_0) ||
};

/// Prebuilt per-leg data, for hot loops that evaluate many cycles over the
/// same model (the optimizer, contour grids).
struct LegGen {
  PauliGenerator gen;
  Vector eps;   // full d-vector of energies
  int bath = 0;
  double mu = 0.0;
};

std::vector<LegGen> build_leg_gens(const ThermalModel& model, const GeneralizedOttoCycle& cycle);

/// Solve (sum_j mu_j G_j) p_hat0 = sum_j mu_j G_j p_hat_eq_j in the reduced
/// representation; p_1 reconstructed from normalization. Throws
/// DegenerateCycle when the aggregate generator is near singular.
FastSteadyState fast_steady_state(const std::vector<LegGen>& legs);
FastSteadyState fast_steady_state(const ThermalModel& model, const GeneralizedOttoCycle& cycle);

/// Fast-driving GAP: sum_j mu_j c_{alpha_j} eps_j . (M_j p0).
double fast_gap(const std::vector<LegGen>& legs, const GapWeights& weights);
double fast_gap(const ThermalModel& model, const GeneralizedOttoCycle& cycle, const GapWeights& weights);

/// Fastest relaxation rate along the cycle: max over legs of the spectral
/// norm of the reduced generator.
double relaxation_rate_eta(const std::vector<LegGen>& legs);
double relaxation_rate_eta(const ThermalModel& model, const GeneralizedOttoCycle& cycle);

/// eta*T below this default counts as fast driving. Heuristic, see diagnostics.
inline constexpr double kFastRegimeThreshold = 1e-2;
inline bool fast_regime(double eta, double period, double threshold = kFastRegimeThreshold) {
  return eta * period < threshold;
}

/// Norm of the curve's center of mass with respect to the given populations;
/// ~0 exactly when p0 solves the fast-steady-state equation.
double center_of_mass_residual(const std::vector<LegGen>& legs, const Vector& p0);
double center_of_mass_residual(const ThermalModel& model, const GeneralizedOttoCycle& cycle,
                               const Vector& p0);

}  // namespace ottoforge
