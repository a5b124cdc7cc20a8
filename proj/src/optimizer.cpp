#include "ottoforge/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ottoforge/nelder_mead.hpp"
#include "ottoforge/rng.hpp"

namespace ottoforge {

namespace {

constexpr double kInfeasible = 1e300;
constexpr double kThetaRange = 4.0;  // logistic arguments start in [-4, 4]

double binomial_guarded(int n, int k) {
  double v = 1.0;
  for (int i = 1; i <= k; ++i) {
    v *= static_cast<double>(n - k + i) / static_cast<double>(i);
    if (v > 1e18) return v;
  }
  return v;
}

double logistic(double t) { return 1.0 / (1.0 + std::exp(-t)); }

/// Decode an unconstrained parameter vector into a cycle: the first L-1
/// entries drive a stick-breaking split of the time fractions, the remaining
/// L*M entries map into the control boxes through scaled logistics. Controls
/// therefore satisfy the box constraints exactly, never by clipping.
GeneralizedOttoCycle decode_cycle(const Vector& theta, const std::vector<int>& assignment,
                                  const ControlDomain& domain) {
  const int L = static_cast<int>(assignment.size());
  const int M = domain.size();
  GeneralizedOttoCycle cycle;
  cycle.legs.resize(L);

  double rest = 1.0;
  for (int i = 0; i < L; ++i) {
    double mu;
    if (i + 1 < L) {
      const double v = logistic(theta[i]);
      mu = rest * v;
      rest *= (1.0 - v);
    } else {
      mu = rest;
    }
    cycle.legs[i].mu = mu;
    cycle.legs[i].bath = assignment[i];
    ControlVector u(M);
    for (int m = 0; m < M; ++m) {
      const auto& [lo, hi] = domain.boxes[m];
      u[m] = lo + (hi - lo) * logistic(theta[(L - 1) + i * M + m]);
    }
    cycle.legs[i].control = std::move(u);
  }
  return cycle;
}

double logit_clamped(double p) {
  p = std::clamp(p, 1e-16, 1.0 - 1e-16);
  return std::log(p / (1.0 - p));
}

/// Inverse of decode_cycle: recover an unconstrained parameter vector whose
/// decoding reproduces the given cycle (up to logistic clamping).
Vector encode_cycle(const GeneralizedOttoCycle& cycle, const ControlDomain& domain) {
  const int L = cycle.size();
  const int M = domain.size();
  Vector theta((L - 1) + L * M);
  double rest = 1.0;
  for (int i = 0; i + 1 < L; ++i) {
    const double v = (rest > 0.0) ? cycle.legs[i].mu / rest : 0.0;
    theta[i] = logit_clamped(v);
    rest -= cycle.legs[i].mu;
  }
  for (int i = 0; i < L; ++i) {
    for (int m = 0; m < M; ++m) {
      const auto& [lo, hi] = domain.boxes[m];
      theta[(L - 1) + i * M + m] = logit_clamped((cycle.legs[i].control[m] - lo) / (hi - lo));
    }
  }
  return theta;
}

/// Degenerate optima can split one optimal control point across several legs
/// of the same bath; the split is an exactly flat direction of the GAP, so
/// the local search has no reason to collapse it. Canonicalize: pour each
/// near-duplicate group onto one representative leg, re-polish, and keep the
/// consolidated representation only if it does not lose value.
GeneralizedOttoCycle consolidate_duplicates(const GeneralizedOttoCycle& cycle,
                                            const ControlDomain& domain) {
  const int L = cycle.size();
  std::vector<int> group(L);
  for (int i = 0; i < L; ++i) group[i] = i;
  for (int i = 0; i < L; ++i) {
    for (int j = 0; j < i; ++j) {
      if (cycle.legs[i].bath != cycle.legs[j].bath) continue;
      bool close = true;
      for (int m = 0; m < domain.size(); ++m) {
        const auto& [lo, hi] = domain.boxes[m];
        if (std::abs(cycle.legs[i].control[m] - cycle.legs[j].control[m]) > 0.01 * (hi - lo)) {
          close = false;
          break;
        }
      }
      if (close) {
        group[i] = group[j];
        break;
      }
    }
  }
  GeneralizedOttoCycle out = cycle;
  for (int g = 0; g < L; ++g) {
    double mass = 0.0;
    ControlVector mean = ControlVector::Zero(domain.size());
    for (int i = 0; i < L; ++i) {
      if (group[i] != g) continue;
      mass += cycle.legs[i].mu;
      mean += cycle.legs[i].mu * cycle.legs[i].control;
    }
    if (mass <= 0.0) continue;
    mean /= mass;
    bool first = true;
    for (int i = 0; i < L; ++i) {
      if (group[i] != g) continue;
      out.legs[i].control = mean;
      out.legs[i].mu = first ? mass : 0.0;
      first = false;
    }
  }
  return out;
}

double power_scale(const ThermalModel& model) {
  double max_rate = 0.0;
  for (const BathModel& b : model.baths) {
    switch (b.family) {
      case BathFamily::FermionicFlat:
      case BathFamily::BosonicOhmic:
        max_rate = std::max(max_rate, b.gamma);
        break;
      case BathFamily::FixedRate:
        max_rate = std::max(max_rate, b.rate);
        break;
      case BathFamily::Peaked:
        for (const auto& p : b.pair_rates) max_rate = std::max(max_rate, p.rate);
        break;
    }
  }
  double max_energy = 0.0;
  for (const auto& [lo, hi] : model.domain.boxes) {
    max_energy = std::max({max_energy, std::abs(lo), std::abs(hi)});
  }
  return std::max(max_rate * max_energy, 1e-30);
}

}  // namespace

std::vector<std::vector<int>> enumerate_bath_assignments(int legs, int baths) {
  if (legs < 1 || baths < 1) throw InvalidInput("enumerate_bath_assignments: need legs >= 1, baths >= 1");
  if (binomial_guarded(legs + baths - 1, baths - 1) > 1e6) {
    throw InvalidInput("assignment count C(L+N-1, N-1) exceeds 1e6; lower the leg budget L");
  }
  std::vector<std::vector<int>> out;
  std::vector<int> cur(legs, 0);
  while (true) {
    out.push_back(cur);
    int i = legs - 1;
    while (i >= 0 && cur[i] == baths - 1) --i;
    if (i < 0) break;
    const int v = cur[i] + 1;
    for (int j = i; j < legs; ++j) cur[j] = v;
  }
  return out;
}

int positive_gap_leg_bound(const GapWeights& weights, const std::vector<BathModel>& baths) {
  weights.validate(static_cast<int>(baths.size()));
  if (!weights.is_positive()) {
    throw NotApplicable("positive_gap_leg_bound applies to nonnegative weights only");
  }
  std::vector<double> betas;
  for (std::size_t a = 0; a < baths.size(); ++a) {
    if (weights.c[a] == 0.0) continue;
    const double b = baths[a].beta;
    bool seen = false;
    for (double x : betas) {
      if (std::abs(x - b) <= 1e-12 * std::max(std::abs(x), std::abs(b))) {
        seen = true;
        break;
      }
    }
    if (!seen) betas.push_back(b);
  }
  const int kappa = static_cast<int>(betas.size());
  return std::min(static_cast<int>(baths.size()), kappa + 1);
}

OptimizationResult optimize_cycle(const OptimizationProblem& problem, par::Mode mode) {
  problem.validate();
  const ThermalModel& model = problem.model;
  const OptimizerSettings& st = problem.settings;
  const int L = st.max_legs;
  const int M = model.dimension - 1;
  const int dim = (L - 1) + L * M;

  const auto assignments = enumerate_bath_assignments(L, model.n_baths());
  const int A = static_cast<int>(assignments.size());
  const std::size_t tasks = static_cast<std::size_t>(A) * st.starts;

  struct TaskResult {
    Vector theta;
    double initial = kInfeasible;
    double value = kInfeasible;
  };
  std::vector<TaskResult> results(tasks);

  NelderMeadOptions nm;
  nm.ftol_abs = st.ftol * power_scale(model);
  nm.max_evals = st.max_evals;
  nm.initial_step = 0.5;

  par::for_each_index(
      tasks,
      [&](std::size_t t) {
        const int a = static_cast<int>(t) / st.starts;
        const int s = static_cast<int>(t) % st.starts;
        const std::vector<int>& assign = assignments[a];

        // Latin hypercube across the starts of one assignment: coordinate k of
        // start s falls in stratum pi_k(s), with pi_k a seeded permutation.
        Vector theta0(dim);
        for (int k = 0; k < dim; ++k) {
          Rng perm_rng = Rng::stream(st.seed, {0x5eedu, static_cast<std::uint64_t>(a),
                                               static_cast<std::uint64_t>(k)});
          std::vector<int> strata(st.starts);
          for (int i = 0; i < st.starts; ++i) strata[i] = i;
          for (int i = st.starts - 1; i > 0; --i) {
            std::swap(strata[i], strata[perm_rng.uniform_int(i + 1)]);
          }
          Rng jitter = Rng::stream(st.seed, {0xa1cu, static_cast<std::uint64_t>(a),
                                             static_cast<std::uint64_t>(k),
                                             static_cast<std::uint64_t>(s)});
          const double frac = (strata[s] + jitter.uniform01()) / st.starts;
          theta0[k] = -kThetaRange + 2.0 * kThetaRange * frac;
        }

        auto objective = [&](const Vector& theta) -> double {
          const GeneralizedOttoCycle cyc = decode_cycle(theta, assign, model.domain);
          try {
            return -fast_gap(model, cyc, problem.weights);
          } catch (const DegenerateCycle&) {
            return kInfeasible;
          }
        };

        TaskResult tr;
        tr.initial = objective(theta0);
        const NelderMeadResult r = nelder_mead(objective, theta0, nm);
        tr.theta = r.x;
        tr.value = r.value;
        results[t] = std::move(tr);
      },
      mode);

  // Deterministic reduction in flat task order.
  std::size_t best_t = 0;
  for (std::size_t t = 1; t < tasks; ++t) {
    if (results[t].value < results[best_t].value) best_t = t;
  }
  if (results[best_t].value >= kInfeasible) {
    throw OptimizationFailed(
        "no feasible cycle: every bath assignment produced a degenerate aggregate generator");
  }

  OptimizationResult out;
  const int best_a = static_cast<int>(best_t) / st.starts;
  out.assignment = assignments[best_a];
  out.cycle = decode_cycle(results[best_t].theta, out.assignment, model.domain);
  out.gap = -results[best_t].value;

  {
    auto objective = [&](const Vector& theta) -> double {
      const GeneralizedOttoCycle cyc = decode_cycle(theta, out.assignment, model.domain);
      try {
        return -fast_gap(model, cyc, problem.weights);
      } catch (const DegenerateCycle&) {
        return kInfeasible;
      }
    };
    const GeneralizedOttoCycle merged = consolidate_duplicates(out.cycle, model.domain);
    const Vector theta2 = encode_cycle(merged, model.domain);
    NelderMeadOptions polish = nm;
    polish.initial_step = 0.05;
    const NelderMeadResult r2 = nelder_mead(objective, theta2, polish);
    if (-r2.value >= out.gap - 1e-12) {
      out.cycle = decode_cycle(r2.x, out.assignment, model.domain);
      out.gap = -r2.value;
    }
  }
  out.raw_cycle = out.cycle;
  out.trace.reserve(tasks);
  for (std::size_t t = 0; t < tasks; ++t) {
    out.trace.push_back({static_cast<int>(t) / st.starts, static_cast<int>(t) % st.starts,
                         -results[t].initial, -results[t].value});
  }

  out = prune_legs(model, problem.weights, std::move(out));

  const auto legs = build_leg_gens(model, out.cycle);
  const FastSteadyState ss = fast_steady_state(legs);
  out.leg_heat_rates.clear();
  for (const LegGen& l : legs) {
    out.leg_heat_rates.push_back(l.mu * problem.weights.c.at(l.bath) * l.eps.dot(l.gen.full * ss.p0));
  }
  return out;
}

OptimizationResult prune_legs(const ThermalModel& model, const GapWeights& weights,
                              OptimizationResult result) {
  if (result.raw_cycle.legs.empty()) result.raw_cycle = result.cycle;
  const double gap_before = fast_gap(model, result.cycle, weights);

  auto same_leg = [&](const Leg& a, const Leg& b) {
    if (a.bath != b.bath) return false;
    for (int m = 0; m < a.control.size(); ++m) {
      const auto& [lo, hi] = model.domain.boxes[m];
      if (std::abs(a.control[m] - b.control[m]) > 1e-12 * std::max(1.0, hi - lo)) return false;
    }
    return true;
  };

  auto rebuild = [&](double drop_tol) {
    std::vector<Leg> merged;
    for (const Leg& leg : result.cycle.legs) {
      bool found = false;
      for (Leg& m : merged) {
        if (same_leg(m, leg)) {
          m.mu += leg.mu;
          found = true;
          break;
        }
      }
      if (!found) merged.push_back(leg);
    }
    std::vector<Leg> kept;
    double total = 0.0;
    for (const Leg& m : merged) {
      if (m.mu >= drop_tol) {
        kept.push_back(m);
        total += m.mu;
      }
    }
    for (Leg& k : kept) k.mu /= total;
    return kept;
  };

  GeneralizedOttoCycle pruned;
  pruned.legs = rebuild(1e-6);
  double gap_after = fast_gap(model, pruned, weights);
  if (std::abs(gap_after - gap_before) > 1e-9 * std::max(std::abs(gap_before), 1e-300)) {
    // A dropped leg was load-bearing after all; keep only exact-measure-zero drops.
    pruned.legs = rebuild(1e-12);
    gap_after = fast_gap(model, pruned, weights);
  }
  result.cycle = std::move(pruned);
  result.gap = gap_after;
  result.pruned = true;
  return result;
}

}  // namespace ottoforge
