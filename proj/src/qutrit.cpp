#include "ottoforge/qutrit.hpp"

#include <algorithm>
#include <cmath>

#include "ottoforge/nelder_mead.hpp"

namespace ottoforge {

ThermalModel build_qutrit_model(QutritKind kind, double beta1, double beta2, double gamma,
                                double box_hi) {
  if (!(beta1 > 0.0) || !(beta2 > 0.0) || !(gamma > 0.0)) {
    throw InvalidInput("build_qutrit_model: parameters must be positive");
  }
  ThermalModel m;
  m.dimension = 3;
  m.domain.boxes = {{0.0, box_hi}, {0.0, box_hi}};
  const BathFamily family =
      (kind == QutritKind::Fermionic) ? BathFamily::FermionicFlat : BathFamily::BosonicOhmic;
  BathModel b1, b2;
  b1.beta = beta1;
  b1.family = family;
  b1.gamma = gamma;
  b2.beta = beta2;
  b2.family = family;
  b2.gamma = gamma;
  m.baths = {b1, b2};
  m.validate();
  return m;
}

Fig4Result reproduce_fig4(QutritKind kind, double beta1, double beta2, double gamma,
                          const std::vector<double>& periods, const OptimizerSettings& settings,
                          par::Mode mode) {
  OptimizationProblem prob;
  prob.model = build_qutrit_model(kind, beta1, beta2, gamma);
  prob.weights = GapWeights::engine(2);
  prob.settings = settings;
  prob.settings.max_legs = 3;

  Fig4Result out;
  out.optimization = optimize_cycle(prob, mode);
  out.fast_gap_value = out.optimization.gap;

  for (const Leg& l : out.optimization.raw_cycle.legs) {
    out.min_mu_before_prune = std::min(out.min_mu_before_prune, l.mu);
    if (l.mu > 1e-3) {
      ++out.effective_legs;
      out.max_eps_degeneracy_gap =
          std::max(out.max_eps_degeneracy_gap, std::abs(l.control[0] - l.control[1]));
    }
  }
  // canonical presentation: hot bath (alpha = 1) first
  std::sort(out.optimization.cycle.legs.begin(), out.optimization.cycle.legs.end(),
            [&](const Leg& a, const Leg& b) {
              if (a.bath != b.bath) {
                return prob.model.baths[a.bath].beta < prob.model.baths[b.bath].beta;
              }
              return a.mu > b.mu;
            });

  if (!periods.empty()) {
    out.sweep = sweep_period(prob.model, out.optimization.cycle, prob.weights, periods, mode);
  }
  return out;
}

namespace {

PeakedScenario make_fig5(double beta3_over_beta2) {
  // Temperatures, target points and pair constants of the three-bath contour
  // study; energies in units of 1/beta2, rates in units of gamma.
  ThermalModel m;
  m.dimension = 3;
  m.domain.boxes = {{0.0, 12.0}, {0.0, 12.0}};

  BathModel b1;
  b1.beta = 8.12;
  b1.family = BathFamily::Peaked;
  b1.targets = {1.85, 1.56};
  b1.pair_rates = {{1, 0, 1.0}, {0, 2, 1.21}, {1, 2, 2.28}};

  BathModel b2;
  b2.beta = 1.0;
  b2.family = BathFamily::Peaked;
  b2.targets = {10.07, 9.58};
  b2.pair_rates = {{0, 1, 9.45}, {0, 2, 2.53}, {1, 2, 5.26}};

  BathModel b3;
  b3.beta = beta3_over_beta2;
  b3.family = BathFamily::Peaked;
  b3.targets = {1.75, 8.12};
  b3.pair_rates = {{0, 1, 5.9}, {2, 0, 1.4}, {2, 1, 6.22}};

  m.baths = {b1, b2, b3};
  m.validate();
  return PeakedScenario{std::move(m)};
}

}  // namespace

PeakedScenario PeakedScenario::fig5() { return make_fig5(7.81); }

PeakedScenario PeakedScenario::fig5_two_temperatures() { return make_fig5(1.0); }

GeneralizedOttoCycle PeakedScenario::cycle_at_targets(double x, double y) const {
  GeneralizedOttoCycle c;
  const double mus[3] = {x, (1.0 - x) * y, (1.0 - x) * (1.0 - y)};
  for (int a = 0; a < 3; ++a) {
    Leg leg;
    leg.bath = a;
    leg.mu = mus[a];
    leg.control = Eigen::Map<const Eigen::Vector2d>(model.baths[a].targets.data());
    c.legs.push_back(std::move(leg));
  }
  return c;
}

namespace {

struct PinnedLegs {
  std::vector<LegGen> legs;  // mu filled per evaluation

  double power(double x, double y) {
    legs[0].mu = x;
    legs[1].mu = (1.0 - x) * y;
    legs[2].mu = (1.0 - x) * (1.0 - y);
    return fast_gap(legs, GapWeights::engine(3));
  }
};

PinnedLegs pinned_legs(const PeakedScenario& sc) {
  GeneralizedOttoCycle c = sc.cycle_at_targets(1.0 / 3, 0.5);
  for (Leg& l : c.legs) l.mu = 1.0 / 3;
  return PinnedLegs{build_leg_gens(sc.model, c)};
}

// Dense scan plus golden-section polish of a 1-d slice.
template <class F>
double maximize_1d(F&& f, int coarse = 2048) {
  double best = -1e300, bx = 0.0;
  for (int i = 0; i <= coarse; ++i) {
    const double t = static_cast<double>(i) / coarse;
    const double v = f(t);
    if (v > best) {
      best = v;
      bx = t;
    }
  }
  double lo = std::max(0.0, bx - 1.0 / coarse), hi = std::min(1.0, bx + 1.0 / coarse);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = hi - gr * (hi - lo), b = lo + gr * (hi - lo);
  double fa = f(a), fb = f(b);
  for (int it = 0; it < 80; ++it) {
    if (fa < fb) {
      lo = a;
      a = b;
      fa = fb;
      b = lo + gr * (hi - lo);
      fb = f(b);
    } else {
      hi = b;
      b = a;
      fb = fa;
      a = hi - gr * (hi - lo);
      fa = f(a);
    }
  }
  return std::max(best, std::max(fa, fb));
}

}  // namespace

ContourResult contour_xy(const PeakedScenario& scenario, int resolution, par::Mode mode) {
  if (resolution < 64) throw InvalidInput("contour_xy: resolution must be >= 64");
  ContourResult out;
  out.resolution = resolution;
  out.xs.resize(resolution);
  out.ys.resize(resolution);
  for (int i = 0; i < resolution; ++i) {
    out.xs[i] = static_cast<double>(i) / (resolution - 1);
    out.ys[i] = out.xs[i];
  }
  out.grid.assign(static_cast<std::size_t>(resolution) * resolution, 0.0);

  par::for_each_index(
      static_cast<std::size_t>(resolution),
      [&](std::size_t i) {
        PinnedLegs pl = pinned_legs(scenario);  // per-task copy, no shared mutation
        for (int j = 0; j < resolution; ++j) {
          out.grid[i * resolution + j] = pl.power(out.xs[i], out.ys[j]);
        }
      },
      mode);

  std::size_t best = 0;
  for (std::size_t k = 1; k < out.grid.size(); ++k) {
    if (out.grid[k] > out.grid[best]) best = k;
  }
  out.grid_max = out.grid[best];
  out.grid_x = out.xs[best / resolution];
  out.grid_y = out.ys[best % resolution];

  // refine the argmax in the open square through a logit map
  PinnedLegs pl = pinned_legs(scenario);
  auto logit = [](double p) { return std::log(p / (1.0 - p)); };
  auto expit = [](double t) { return 1.0 / (1.0 + std::exp(-t)); };
  Vector t0(2);
  t0 << logit(std::clamp(out.grid_x, 1e-3, 1.0 - 1e-3)),
      logit(std::clamp(out.grid_y, 1e-3, 1.0 - 1e-3));
  NelderMeadOptions nm;
  nm.ftol_abs = 1e-13 * std::max(std::abs(out.grid_max), 1e-6);
  nm.max_evals = 4000;
  nm.initial_step = 0.05;
  const auto r = nelder_mead(
      [&](const Vector& t) { return -pl.power(expit(t[0]), expit(t[1])); }, t0, nm);
  out.refined_x = expit(r.x[0]);
  out.refined_y = expit(r.x[1]);
  out.refined_value = -r.value;

  // boundary = protocols with at most 2 legs
  double bmax = -1e300;
  bmax = std::max(bmax, maximize_1d([&](double y) { return pl.power(0.0, y); }));
  bmax = std::max(bmax, maximize_1d([&](double y) { return pl.power(1.0, y); }));
  bmax = std::max(bmax, maximize_1d([&](double x) { return pl.power(x, 0.0); }));
  bmax = std::max(bmax, maximize_1d([&](double x) { return pl.power(x, 1.0); }));
  out.boundary_max = bmax;
  out.interior_margin =
      (out.refined_value - out.boundary_max) / std::max(std::abs(out.refined_value), 1e-300);
  return out;
}

}  // namespace ottoforge
