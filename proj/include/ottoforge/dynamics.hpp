#pragma once

#include <vector>

#include "ottoforge/model.hpp"
#include "ottoforge/parallel.hpp"
#include "ottoforge/types.hpp"

namespace ottoforge {

/// A generalized Otto cycle executed at finite period T.
struct PiecewiseProtocol {
  GeneralizedOttoCycle cycle;
  double period = 1.0;

  void validate(const ThermalModel& model) const {
    cycle.validate(model.n_baths(), model.dimension - 1);
    for (const Leg& l : cycle.legs) {
      if (!(l.mu > 0.0)) throw InvalidInput("protocol legs need strictly positive durations");
    }
    if (!(period > 0.0) || !std::isfinite(period)) throw InvalidInput("period must be positive and finite");
  }
};

struct LimitCycleSolution {
  std::vector<Vector> boundary_populations;  // p(t_0), ..., p(t_L) = p(t_0)
  std::vector<double> leg_heat;              // Delta Q per leg, attributed to that leg's bath
  std::vector<double> bath_heat;             // Delta Q aggregated per bath
  std::vector<double> quench_work_in;        // energy injected at each quench
  std::vector<int> leg_bath;
  double period = 0.0;
  double first_law_residual = 0.0;           // |sum Q + sum W_in|
  double periodicity_residual = 0.0;         // |p(T) - p(0)|_inf
};

/// exp(M tau) p with probability-conservation guards. Drift beyond 1e-13 is
/// renormalized; beyond 1e-8 it is treated as a model bug.
Vector propagate(const PauliGenerator& gen, const Vector& p, double tau);

/// Unique periodic solution of the piecewise-constant protocol, from the
/// fixed point of the one-period map.
LimitCycleSolution limit_cycle(const ThermalModel& model, const PiecewiseProtocol& protocol,
                               int replaced_row = -1);

double average_gap_finite(const LimitCycleSolution& sol, const GapWeights& weights);

/// Time average of the limit-cycle populations over one period.
Vector limit_cycle_time_average(const ThermalModel& model, const PiecewiseProtocol& protocol);

/// Forward-integrate an arbitrary initial state through k full periods.
Vector propagate_periods(const ThermalModel& model, const PiecewiseProtocol& protocol,
                         Vector p, int periods);

struct PeriodSweepRow {
  double period;  // 0 marks the fast-driving reference row
  double gap;
};

/// Finite-time GAP at each period, holding the time fractions fixed. The
/// first row carries the fast-driving value at period 0.
std::vector<PeriodSweepRow> sweep_period(const ThermalModel& model, const GeneralizedOttoCycle& cycle,
                                         const GapWeights& weights, const std::vector<double>& periods,
                                         par::Mode mode = par::Mode::Parallel);

}  // namespace ottoforge
