#pragma once

#include "ottoforge/dynamics.hpp"
#include "ottoforge/optimizer.hpp"

namespace ottoforge {

enum class QutritKind { Fermionic, Bosonic };

/// d = 3 working fluid with controls (eps2, eps3), ground level pinned at 0,
/// and two baths of the given family. Energies in units of 1/beta2, rates in
/// units of gamma.
ThermalModel build_qutrit_model(QutritKind kind, double beta1, double beta2, double gamma,
                                double box_hi = 12.0);

struct Fig4Result {
  OptimizationResult optimization;      // pruned optimum, legs sorted hot-bath-first
  double fast_gap_value = 0.0;
  double min_mu_before_prune = 1.0;
  int effective_legs = 0;               // legs with mu > 1e-3 before pruning
  double max_eps_degeneracy_gap = 0.0;  // max |eps2 - eps3| over effective legs
  std::vector<PeriodSweepRow> sweep;    // leading row = fast-driving value at T = 0
};

/// Optimize with an L = 3 budget, report the effective-2-leg structure, and
/// sweep the period holding the time fractions fixed.
Fig4Result reproduce_fig4(QutritKind kind, double beta1, double beta2, double gamma,
                          const std::vector<double>& periods, const OptimizerSettings& settings,
                          par::Mode mode = par::Mode::Parallel);

/// Three peaked baths; each bath's rates switch on only at its own target
/// point of the (eps2, eps3) plane.
struct PeakedScenario {
  ThermalModel model;

  /// The three-bath counterexample scenario. Pair constants and the
  /// temperature/target tables follow the published contour study; each
  /// pair constant is a directed rate, the reverse direction fixed by
  /// detailed balance.
  static PeakedScenario fig5();

  /// Variant with only two distinct temperatures (bath 3 moved to bath 2's
  /// temperature), keeping everything else.
  static PeakedScenario fig5_two_temperatures();

  GeneralizedOttoCycle cycle_at_targets(double x, double y) const;
};

struct ContourResult {
  int resolution = 0;
  std::vector<double> xs, ys;
  std::vector<double> grid;      // row-major: grid[i*res + j] = P(xs[i], ys[j])
  double grid_max = 0.0;
  double grid_x = 0.0, grid_y = 0.0;
  double refined_x = 0.0, refined_y = 0.0, refined_value = 0.0;
  double boundary_max = 0.0;     // best <= 2-leg protocol (box edges)
  double interior_margin = 0.0;  // (refined_value - boundary_max)/|refined_value|
};

/// Evaluate the fast-driving engine power on the (x, y) grid of time-fraction
/// splits mu = (x, (1-x)y, (1-x)(1-y)), refine the interior argmax, and
/// maximize separately over the boundary.
ContourResult contour_xy(const PeakedScenario& scenario, int resolution,
                         par::Mode mode = par::Mode::Parallel);

}  // namespace ottoforge
