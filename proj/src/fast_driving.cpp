#include "ottoforge/fast_driving.hpp"

#include <cmath>

#include "ottoforge/validate.hpp"

namespace ottoforge {

std::vector<LegGen> build_leg_gens(const ThermalModel& model, const GeneralizedOttoCycle& cycle) {
  cycle.validate(model.n_baths(), model.dimension - 1);
  std::vector<LegGen> legs;
  legs.reserve(cycle.legs.size());
  for (const Leg& l : cycle.legs) {
    LegGen lg;
    lg.gen = model.leg_generator(l.control, l.bath);
    lg.eps = model.spectrum_for(l.control).energies;
    lg.bath = l.bath;
    lg.mu = l.mu;
    legs.push_back(std::move(lg));
  }
  return legs;
}

FastSteadyState fast_steady_state(const std::vector<LegGen>& legs) {
  if (legs.empty()) throw InvalidInput("fast_steady_state: empty cycle");
  const int d = legs.front().gen.dimension();
  const int r = d - 1;
  Matrix A = Matrix::Zero(r, r);
  Vector rhs = Vector::Zero(r);
  for (const LegGen& l : legs) {
    A.noalias() += l.mu * l.gen.reduced;
    rhs.noalias() += l.mu * (l.gen.reduced * l.gen.gibbs.tail(r));
  }

  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(r - 1);
  if (!(smin > 0.0) || smax / smin > 1e12) {
    GeneralizedOttoCycle cyc;
    for (const LegGen& l : legs) {
      Leg leg;
      leg.control = l.eps.tail(r);
      leg.bath = l.bath;
      leg.mu = l.mu;
      cyc.legs.push_back(std::move(leg));
    }
    throw DegenerateCycle(
        "degenerate cycle: aggregate generator condition number exceeds 1e12; "
        "check that the union transition graph of the cycle is strongly connected");
  }

  Vector phat = svd.solve(rhs);
  Vector p0(d);
  p0[0] = 1.0 - phat.sum();
  p0.tail(r) = phat;

  FastSteadyState out;
  out.residual = (A * phat - rhs).norm();
  out.p0 = std::move(p0);
  return out;
}

FastSteadyState fast_steady_state(const ThermalModel& model, const GeneralizedOttoCycle& cycle) {
  return fast_steady_state(build_leg_gens(model, cycle));
}

double fast_gap(const std::vector<LegGen>& legs, const GapWeights& weights) {
  const FastSteadyState ss = fast_steady_state(legs);
  double total = 0.0;
  for (const LegGen& l : legs) {
    total += l.mu * weights.c.at(l.bath) * l.eps.dot(l.gen.full * ss.p0);
  }
  return total;
}

double fast_gap(const ThermalModel& model, const GeneralizedOttoCycle& cycle, const GapWeights& weights) {
  weights.validate(model.n_baths());
  return fast_gap(build_leg_gens(model, cycle), weights);
}

double relaxation_rate_eta(const std::vector<LegGen>& legs) {
  double eta = 0.0;
  for (const LegGen& l : legs) {
    Eigen::JacobiSVD<Matrix> svd(l.gen.reduced);
    eta = std::max(eta, svd.singularValues()(0));
  }
  return eta;
}

double relaxation_rate_eta(const ThermalModel& model, const GeneralizedOttoCycle& cycle) {
  return relaxation_rate_eta(build_leg_gens(model, cycle));
}

double center_of_mass_residual(const std::vector<LegGen>& legs, const Vector& p0) {
  if (legs.empty()) throw InvalidInput("center_of_mass_residual: empty cycle");
  const int r = legs.front().gen.dimension() - 1;
  Vector acc = Vector::Zero(r);
  for (const LegGen& l : legs) {
    acc.noalias() += l.mu * (l.gen.reduced * (l.gen.gibbs.tail(r) - p0.tail(r)));
  }
  return acc.norm();
}

double center_of_mass_residual(const ThermalModel& model, const GeneralizedOttoCycle& cycle,
                               const Vector& p0) {
  return center_of_mass_residual(build_leg_gens(model, cycle), p0);
}

}  // namespace ottoforge
