#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "ottoforge/errors.hpp"

namespace ottoforge {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Energy levels of the working fluid, gauge-fixed so energies[0] == 0.
struct Spectrum {
  Vector energies;

  int dimension() const { return static_cast<int>(energies.size()); }

  static Spectrum make(Vector energies) {
    if (energies.size() < 2) throw InvalidInput("spectrum needs at least 2 levels");
    if (energies[0] != 0.0) throw InvalidInput("spectrum gauge requires energies[0] == 0");
    for (Eigen::Index i = 0; i < energies.size(); ++i) {
      if (!std::isfinite(energies[i])) throw InvalidInput("non-finite spectrum energy");
    }
    return Spectrum{std::move(energies)};
  }
};

/// Per-component box constraints for the control vector. In full-Hamiltonian
/// control mode the control components are the d-1 non-ground energies.
struct ControlDomain {
  std::vector<std::pair<double, double>> boxes;

  int size() const { return static_cast<int>(boxes.size()); }

  void validate() const {
    for (const auto& [lo, hi] : boxes) {
      if (!std::isfinite(lo) || !std::isfinite(hi) || lo >= hi) {
        throw InvalidInput("control box must be a finite, well-ordered interval");
      }
    }
  }

  bool contains(const Vector& u, double slack = 0.0) const {
    if (u.size() != size()) return false;
    for (int i = 0; i < size(); ++i) {
      if (u[i] < boxes[i].first - slack || u[i] > boxes[i].second + slack) return false;
    }
    return true;
  }
};

using ControlVector = Vector;

/// Weights c_alpha of the generalized average power, one per bath.
struct GapWeights {
  std::vector<double> c;

  static GapWeights engine(int n_baths) { return GapWeights{std::vector<double>(n_baths, 1.0)}; }
  static GapWeights heater(int n_baths) { return GapWeights{std::vector<double>(n_baths, -1.0)}; }
  /// Cooling power: weight 1 on the coldest bath (largest beta).
  template <class Baths>
  static GapWeights refrigerator(const Baths& baths) {
    int coldest = 0;
    for (int i = 1; i < static_cast<int>(baths.size()); ++i) {
      if (baths[i].beta > baths[coldest].beta) coldest = i;
    }
    GapWeights w{std::vector<double>(baths.size(), 0.0)};
    w.c[coldest] = 1.0;
    return w;
  }

  bool is_positive() const {
    for (double v : c) {
      if (v < 0.0) return false;
    }
    return true;
  }

  void validate(int n_baths) const {
    if (static_cast<int>(c.size()) != n_baths) throw InvalidInput("weight length mismatch");
    for (double v : c) {
      if (!std::isfinite(v)) throw InvalidInput("non-finite GAP weight");
    }
  }
};

}  // namespace ottoforge
