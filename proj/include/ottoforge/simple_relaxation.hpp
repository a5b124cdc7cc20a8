#pragma once

#include <optional>

#include "ottoforge/types.hpp"

namespace ottoforge {

/// Single-timescale thermalization: every observable relaxes at one scalar
/// rate per bath. Bath 1 is the hot one (beta1 < beta2).
struct SimpleRelaxModel {
  double beta1 = 0.5;
  double beta2 = 1.0;
  double Gamma1 = 1.0;
  double Gamma2 = 1.0;

  void validate() const {
    if (!(0.0 < beta1 && beta1 < beta2) || !std::isfinite(beta2)) {
      throw InvalidInput("simple-relaxation model requires 0 < beta1 < beta2");
    }
    if (!(Gamma1 > 0.0) || !(Gamma2 > 0.0)) throw InvalidInput("thermalization rates must be > 0");
  }

  /// (sqrt(1/Gamma1) + sqrt(1/Gamma2))^2, the universal rate denominator.
  double rate_denominator() const {
    const double s = 1.0 / std::sqrt(Gamma1) + 1.0 / std::sqrt(Gamma2);
    return s * s;
  }
};

enum class MachineKind { Engine, Refrigerator };

/// Optimal fraction of the period spent on bath 1.
double optimal_split(double Gamma1, double Gamma2);

/// Two-leg maximum power at fixed spectra (arbitrary energy lists of equal
/// dimension, gauge e_0 = 0 excluded from the lists? No: pass the full
/// non-ground energies; the ground level is implicit at zero).
double max_engine_power(const SimpleRelaxModel& model, const Vector& eps1, const Vector& eps2);

struct MachineOptimum {
  MachineKind kind = MachineKind::Engine;
  bool eps1_infinite = false;  // fridge: hot-bath gap diverges (analytic limit)
  double eps1 = 0.0;
  double eps2 = 0.0;
  double mu1 = 0.5;
  double power = 0.0;
  double efficiency = 0.0;     // engine: eta; fridge: coefficient of performance
  double x1 = 0.0, x2 = 0.0;   // beta_i * eps_i at the optimum
  double objective = 0.0;      // optimal dimensionless objective value
};

/// ln(2^n - 1), exact for small n.
double log_dm1_from_qubits(int n);
inline double log_dm1_from_dimension(double d) { return std::log(d - 1.0); }

/// Degenerate-spectrum engine optimum for ln(d-1) = log_dm1. Damped Newton on
/// the stationarity system, ansatz-seeded for large d, grid-seeded otherwise.
MachineOptimum optimize_engine_spectrum(const SimpleRelaxModel& model, double log_dm1);

/// Fridge optimum: closed form via Lambert W, eps1 -> infinity handled
/// analytically.
MachineOptimum optimize_fridge_spectrum(const SimpleRelaxModel& model, double log_dm1);

struct ManyQubitComparison {
  double gap_interacting = 0.0;
  double gap_noninteracting = 0.0;
  double ratio = 0.0;
  double asymptote = 0.0;  // thermodynamic-limit reference, linear in n
};

ManyQubitComparison many_qubit_compare(int n, const SimpleRelaxModel& model, MachineKind kind);

struct EfficiencyReport {
  double eta = 0.0;
  double carnot_gap = 0.0;      // eta_C - eta
  double predicted_gap = 0.0;   // (2/ln2)(beta1/beta2) ln(n)/n
};

EfficiencyReport efficiency_at_max_power(int n, double beta1, double beta2);

/// Quadratic coefficient c0 of the d=2 engine maximum power for small
/// temperature differences, in units k_B dT^2 / Tbar * rate_denominator^-1.
/// Least squares on log|P| vs log dT over dT/Tbar in [1e-3, 1e-2].
double engine_small_dt_coefficient(int points = 9);

/// The engine stationarity system evaluated literally (with D = d-1); both
/// components vanish at the optimum. For moderate x only (exponentials).
Eigen::Vector2d engine_stationarity_residual(double x1, double x2, double beta1, double beta2,
                                             double dm1);

}  // namespace ottoforge
