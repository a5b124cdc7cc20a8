#pragma once

#include <string>
#include <vector>

#include "ottoforge/model.hpp"

namespace ottoforge {

/// Diagnostics only; callers decide what is fatal.
struct ModelDiagnostics {
  double detailed_balance_residual = 0.0;  // max |G_nm - exp(beta(e_n-e_m)) G_mn|
  double column_sum_residual = 0.0;        // max |1^T full| over legs, scaled check left to caller
  double max_rate = 0.0;
  bool strongly_connected = false;
  std::vector<int> unreachable_levels;     // union graph, from level 0

  std::string summary() const;
};

/// Inspect the union transition graph and residuals over the given legs
/// (control + bath per leg).
ModelDiagnostics validate_model(const ThermalModel& model, const std::vector<Leg>& legs);

}  // namespace ottoforge
