#pragma once

#include <cstdint>
#include <vector>

#include "ottoforge/fast_driving.hpp"
#include "ottoforge/model.hpp"
#include "ottoforge/parallel.hpp"

namespace ottoforge {

struct OptimizerSettings {
  int max_legs = 2;
  int starts = 32;
  std::uint64_t seed = 1234;
  double ftol = 1e-10;       // absolute, scaled by the problem's power scale
  int max_evals = 2000;      // per start
  bool allow_legs_beyond_dimension = false;
};

struct OptimizationProblem {
  ThermalModel model;
  GapWeights weights;
  OptimizerSettings settings;

  void validate() const {
    model.validate();
    weights.validate(model.n_baths());
    if (settings.max_legs < 1) throw InvalidInput("max_legs must be >= 1");
    if (!settings.allow_legs_beyond_dimension && settings.max_legs > model.dimension) {
      throw InvalidInput("max_legs exceeds the working-fluid dimension bound; override explicitly");
    }
    if (settings.starts < 1) throw InvalidInput("starts must be >= 1");
  }
};

struct StartTrace {
  int assignment = 0;
  int start = 0;
  double initial_value = 0.0;
  double final_value = 0.0;
};

struct OptimizationResult {
  GeneralizedOttoCycle cycle;
  GeneralizedOttoCycle raw_cycle;  // winning cycle before prune_legs
  double gap = 0.0;
  std::vector<double> leg_heat_rates;   // c-weighted contribution of each leg
  std::vector<int> assignment;          // bath indices of the winning assignment
  std::vector<StartTrace> trace;
  bool pruned = false;
};

/// One representative per multiset of size L over N baths (nondecreasing
/// index sequences); the GAP is invariant under leg permutations. Guarded
/// against combinatorial blowup beyond 1e6 assignments.
std::vector<std::vector<int>> enumerate_bath_assignments(int legs, int baths);

/// For positive weights on a simple-relaxation model: the number of legs that
/// suffices, min(N, kappa + 1), with kappa the number of distinct
/// temperatures among baths with nonzero weight.
int positive_gap_leg_bound(const GapWeights& weights, const std::vector<BathModel>& baths);

/// Multi-start derivative-free maximization of the fast-driving GAP over all
/// bath assignments. Deterministic for a given seed, independent of thread
/// count.
OptimizationResult optimize_cycle(const OptimizationProblem& problem,
                                  par::Mode mode = par::Mode::Parallel);

/// Merge duplicate (control, bath) legs and drop measure-zero legs.
OptimizationResult prune_legs(const ThermalModel& model, const GapWeights& weights,
                              OptimizationResult result);

}  // namespace ottoforge
