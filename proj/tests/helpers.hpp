#pragma once

#include <vector>

#include "ottoforge/fast_driving.hpp"
#include "ottoforge/model.hpp"
#include "ottoforge/rng.hpp"

namespace ottoforge::testing {

/// Random fermionic/bosonic model; such rate families connect every pair of
/// levels, so the union graph is always strongly connected.
inline ThermalModel random_model(Rng& rng, int dimension, int n_baths) {
  ThermalModel m;
  m.dimension = dimension;
  double beta_max = 0.0;
  for (int a = 0; a < n_baths; ++a) {
    BathModel b;
    b.beta = rng.uniform(0.3, 3.0);
    b.family = (rng.uniform01() < 0.5) ? BathFamily::FermionicFlat : BathFamily::BosonicOhmic;
    b.gamma = rng.uniform(0.3, 3.0);
    beta_max = std::max(beta_max, b.beta);
    m.baths.push_back(b);
  }
  const double hi = 6.0 / beta_max;
  for (int i = 0; i < dimension - 1; ++i) m.domain.boxes.emplace_back(0.0, hi);
  m.validate();
  return m;
}

inline GeneralizedOttoCycle random_cycle(Rng& rng, const ThermalModel& m, int legs) {
  GeneralizedOttoCycle c;
  double rest = 1.0;
  for (int i = 0; i < legs; ++i) {
    Leg l;
    l.bath = static_cast<int>(rng.uniform_int(m.n_baths()));
    ControlVector u(m.dimension - 1);
    for (int k = 0; k < u.size(); ++k) {
      const auto& [lo, hi] = m.domain.boxes[k];
      u[k] = rng.uniform(lo + 0.05 * (hi - lo), hi - 0.05 * (hi - lo));
    }
    l.control = std::move(u);
    if (i + 1 < legs) {
      l.mu = rest * rng.uniform(0.2, 0.8);
      rest -= l.mu;
    } else {
      l.mu = rest;
    }
    c.legs.push_back(std::move(l));
  }
  return c;
}

}  // namespace ottoforge::testing
