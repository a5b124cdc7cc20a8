#include "ottoforge/dynamics.hpp"

#include <cmath>

#include "ottoforge/expm.hpp"
#include "ottoforge/fast_driving.hpp"
#include "ottoforge/validate.hpp"

namespace ottoforge {

namespace {

Vector checked_population(Vector p, const char* where) {
  const double drift = std::abs(p.sum() - 1.0);
  if (drift > 1e-8) {
    throw InvalidInput(std::string(where) + ": probability drift " + std::to_string(drift) +
                       " exceeds 1e-8, generator is not conservative");
  }
  if (drift > 1e-13) p /= p.sum();
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] < -1e-13) {
      throw InvalidInput(std::string(where) + ": negative population beyond tolerance");
    }
    if (p[i] < 0.0) p[i] = 0.0;
  }
  return p;
}

struct LegPropagators {
  std::vector<Matrix> props;
  std::vector<Vector> eps;        // full d-vector of energies per leg
  std::vector<PauliGenerator> gens;
};

LegPropagators build_propagators(const ThermalModel& model, const PiecewiseProtocol& protocol) {
  LegPropagators lp;
  for (const Leg& leg : protocol.cycle.legs) {
    PauliGenerator gen = model.leg_generator(leg.control, leg.bath);
    lp.props.push_back(expm(gen.full * (leg.mu * protocol.period)));
    lp.eps.push_back(model.spectrum_for(leg.control).energies);
    lp.gens.push_back(std::move(gen));
  }
  return lp;
}

}  // namespace

Vector propagate(const PauliGenerator& gen, const Vector& p, double tau) {
  if (!std::isfinite(tau) || tau < 0.0) throw InvalidInput("propagate: tau must be finite and >= 0");
  if (p.size() != gen.dimension()) throw InvalidInput("propagate: population dimension mismatch");
  const double drift_in = std::abs(p.sum() - 1.0);
  if (drift_in > 1e-8) throw InvalidInput("propagate: input is not a probability vector");
  if (tau == 0.0) return p;
  return checked_population(expm(gen.full * tau) * p, "propagate");
}

LimitCycleSolution limit_cycle(const ThermalModel& model, const PiecewiseProtocol& protocol,
                               int replaced_row) {
  protocol.validate(model);
  const int d = model.dimension;
  const int L = protocol.cycle.size();
  const LegPropagators lp = build_propagators(model, protocol);

  Matrix period_map = Matrix::Identity(d, d);
  for (int i = 0; i < L; ++i) period_map = lp.props[i] * period_map;

  Matrix A = period_map - Matrix::Identity(d, d);
  const int row = (replaced_row >= 0 && replaced_row < d) ? replaced_row : d - 1;
  A.row(row).setOnes();
  Vector rhs = Vector::Zero(d);
  rhs[row] = 1.0;

  Eigen::FullPivLU<Matrix> lu(A);
  if (!lu.isInvertible() || lu.rcond() < 1e-14) {
    const ModelDiagnostics diag = validate_model(model, protocol.cycle.legs);
    throw NoUniqueLimitCycle("no unique limit cycle: period map is singular; " + diag.summary());
  }
  Vector p0 = checked_population(lu.solve(rhs), "limit_cycle");

  LimitCycleSolution sol;
  sol.period = protocol.period;
  sol.bath_heat.assign(model.n_baths(), 0.0);
  sol.boundary_populations.push_back(p0);
  Vector cur = p0;
  for (int i = 0; i < L; ++i) {
    Vector nxt = checked_population(lp.props[i] * cur, "limit_cycle leg");
    const double dq = lp.eps[i].dot(nxt - cur);
    sol.leg_heat.push_back(dq);
    sol.leg_bath.push_back(protocol.cycle.legs[i].bath);
    sol.bath_heat[protocol.cycle.legs[i].bath] += dq;
    const Vector& eps_next = lp.eps[(i + 1) % L];
    sol.quench_work_in.push_back((eps_next - lp.eps[i]).dot(nxt));
    sol.boundary_populations.push_back(nxt);
    cur = std::move(nxt);
  }
  sol.periodicity_residual = (cur - p0).cwiseAbs().maxCoeff();

  double q_total = 0.0, w_total = 0.0;
  for (double q : sol.leg_heat) q_total += q;
  for (double w : sol.quench_work_in) w_total += w;
  sol.first_law_residual = std::abs(q_total + w_total);
  return sol;
}

double average_gap_finite(const LimitCycleSolution& sol, const GapWeights& weights) {
  weights.validate(static_cast<int>(sol.bath_heat.size()));
  double total = 0.0;
  for (std::size_t a = 0; a < sol.bath_heat.size(); ++a) total += weights.c[a] * sol.bath_heat[a];
  return total / sol.period;
}

Vector limit_cycle_time_average(const ThermalModel& model, const PiecewiseProtocol& protocol) {
  const LimitCycleSolution sol = limit_cycle(model, protocol);
  const int L = protocol.cycle.size();
  Vector acc = Vector::Zero(model.dimension);
  for (int i = 0; i < L; ++i) {
    const Leg& leg = protocol.cycle.legs[i];
    const PauliGenerator gen = model.leg_generator(leg.control, leg.bath);
    const double tau = leg.mu * protocol.period;
    acc += expm_integral(gen.full, tau) * sol.boundary_populations[i];
  }
  return acc / protocol.period;
}

Vector propagate_periods(const ThermalModel& model, const PiecewiseProtocol& protocol, Vector p,
                         int periods) {
  protocol.validate(model);
  const LegPropagators lp = build_propagators(model, protocol);
  for (int k = 0; k < periods; ++k) {
    for (const Matrix& pr : lp.props) p = pr * p;
    p = checked_population(std::move(p), "propagate_periods");
  }
  return p;
}

std::vector<PeriodSweepRow> sweep_period(const ThermalModel& model, const GeneralizedOttoCycle& cycle,
                                         const GapWeights& weights, const std::vector<double>& periods,
                                         par::Mode mode) {
  for (std::size_t i = 0; i + 1 < periods.size(); ++i) {
    if (!(periods[i] < periods[i + 1])) throw InvalidInput("sweep_period: periods must be ascending");
  }
  for (double t : periods) {
    if (!(t > 0.0)) throw InvalidInput("sweep_period: periods must be positive");
  }
  std::vector<PeriodSweepRow> rows(periods.size() + 1);
  rows[0] = {0.0, fast_gap(model, cycle, weights)};
  par::for_each_index(
      periods.size(),
      [&](std::size_t i) {
        PiecewiseProtocol proto{cycle, periods[i]};
        rows[i + 1] = {periods[i], average_gap_finite(limit_cycle(model, proto), weights)};
      },
      mode);
  return rows;
}

}  // namespace ottoforge
