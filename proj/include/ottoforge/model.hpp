#pragma once

#include <vector>

#include "ottoforge/bath.hpp"
#include "ottoforge/generator.hpp"
#include "ottoforge/types.hpp"

namespace ottoforge {

/// One constant-control segment of a cycle.
struct Leg {
  ControlVector control;  // d-1 non-ground energies
  int bath = 0;
  double mu = 1.0;        // time fraction
};

/// The optimal-protocol ansatz: L legs with time fractions summing to 1.
/// Carries no period; the fast-driving formulas are homogeneous in mu.
struct GeneralizedOttoCycle {
  std::vector<Leg> legs;

  int size() const { return static_cast<int>(legs.size()); }

  void validate(int n_baths, int control_dim) const {
    if (legs.empty()) throw InvalidInput("cycle needs at least one leg");
    double total = 0.0;
    for (const Leg& l : legs) {
      if (l.bath < 0 || l.bath >= n_baths) throw InvalidInput("leg bath index out of range");
      if (l.control.size() != control_dim) throw InvalidInput("leg control dimension mismatch");
      if (!(l.mu >= 0.0)) throw InvalidInput("leg time fraction must be >= 0");
      total += l.mu;
    }
    if (std::abs(total - 1.0) > 1e-9) throw InvalidInput("leg time fractions must sum to 1");
  }
};

/// Working fluid + baths + control constraints (full-Hamiltonian control:
/// the control vector holds the d-1 non-ground energies).
struct ThermalModel {
  int dimension = 2;
  std::vector<BathModel> baths;
  ControlDomain domain;

  int n_baths() const { return static_cast<int>(baths.size()); }

  void validate() const {
    if (dimension < 2) throw InvalidInput("model dimension must be >= 2");
    if (baths.empty()) throw InvalidInput("model needs at least one bath");
    if (domain.size() != dimension - 1) throw InvalidInput("control domain must have d-1 boxes");
    domain.validate();
    for (const BathModel& b : baths) b.validate(dimension);
  }

  Spectrum spectrum_for(const ControlVector& control) const {
    if (control.size() != dimension - 1) throw InvalidInput("control vector must have d-1 entries");
    Vector e(dimension);
    e[0] = 0.0;
    e.tail(dimension - 1) = control;
    return Spectrum::make(std::move(e));
  }

  PauliGenerator leg_generator(const ControlVector& control, int bath) const {
    if (bath < 0 || bath >= n_baths()) throw InvalidInput("bath index out of range");
    return build_generator(spectrum_for(control), baths[bath]);
  }
};

}  // namespace ottoforge
