#include "ottoforge/simple_relaxation.hpp"

#include <cmath>

#include "ottoforge/lambert.hpp"
#include "ottoforge/nelder_mead.hpp"

namespace ottoforge {

namespace {

// Engine objective in shifted coordinates w_i = x_i - s with s = ln(d-1):
//   f(w1, w2) = [s(b2-b1) + w1 b2 - w2 b1] (e^-w1 - e^-w2)
//               / ((1+e^-w1)(1+e^-w2)).
// Exact for any d and overflow-safe for s up to ~1e308 (d = 2^n works in the
// log domain because d-1 never appears undivided).
struct EngineObjective {
  double s, b1, b2;

  double value(double w1, double w2) const {
    const double e1 = std::exp(-w1), e2 = std::exp(-w2);
    const double num = (s * (b2 - b1) + w1 * b2 - w2 * b1) * (e1 - e2);
    return num / ((1.0 + e1) * (1.0 + e2));
  }

  Eigen::Vector2d gradient(double w1, double w2) const {
    const double e1 = std::exp(-w1), e2 = std::exp(-w2);
    const double N = s * (b2 - b1) + w1 * b2 - w2 * b1;
    const double E = e1 - e2;
    const double Q1 = 1.0 + e1, Q2 = 1.0 + e2;
    Eigen::Vector2d g;
    g[0] = (b2 * E - N * e1) / (Q1 * Q2) + N * E * e1 / (Q1 * Q1 * Q2);
    g[1] = (-b1 * E + N * e2) / (Q1 * Q2) + N * E * e2 / (Q1 * Q2 * Q2);
    return g;
  }

  Eigen::Matrix2d hessian_fd(double w1, double w2) const {
    const double h = 1e-6;
    Eigen::Matrix2d H;
    const Eigen::Vector2d gp1 = gradient(w1 + h, w2), gm1 = gradient(w1 - h, w2);
    const Eigen::Vector2d gp2 = gradient(w1, w2 + h), gm2 = gradient(w1, w2 - h);
    H.col(0) = (gp1 - gm1) / (2 * h);
    H.col(1) = (gp2 - gm2) / (2 * h);
    H = 0.5 * (H + H.transpose().eval());
    return H;
  }
};

// Damped Newton ascent on the gradient; returns true when the gradient norm
// drops below tol.
bool newton_ascend(const EngineObjective& f, Eigen::Vector2d& w, double tol, int max_iter = 200) {
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::Vector2d g = f.gradient(w[0], w[1]);
    if (g.cwiseAbs().maxCoeff() <= tol) return true;
    Eigen::Matrix2d H = f.hessian_fd(w[0], w[1]);
    Eigen::Vector2d step;
    const double det = H.determinant();
    const bool concave = det > 0.0 && H(0, 0) < 0.0;
    if (concave) {
      step = -H.inverse() * g;  // Newton toward the stationary point
    } else {
      step = g / std::max(g.norm(), 1e-300);  // plain ascent
    }
    const double f0 = f.value(w[0], w[1]);
    double t = 1.0;
    Eigen::Vector2d next = w + step;
    while (t > 1e-8 && !(f.value(next[0], next[1]) >= f0)) {
      t *= 0.5;
      next = w + t * step;
    }
    if ((next - w).cwiseAbs().maxCoeff() == 0.0) return g.cwiseAbs().maxCoeff() <= tol * 10;
    w = next;
  }
  return f.gradient(w[0], w[1]).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace

double optimal_split(double Gamma1, double Gamma2) {
  if (!(Gamma1 > 0.0) || !(Gamma2 > 0.0)) throw InvalidInput("optimal_split: rates must be positive");
  const double s1 = std::sqrt(Gamma1), s2 = std::sqrt(Gamma2);
  return s2 / (s1 + s2);
}

double max_engine_power(const SimpleRelaxModel& model, const Vector& eps1, const Vector& eps2) {
  model.validate();
  if (eps1.size() != eps2.size()) throw InvalidInput("max_engine_power: spectrum size mismatch");
  for (Eigen::Index i = 0; i < eps1.size(); ++i) {
    if (!std::isfinite(eps1[i]) || !std::isfinite(eps2[i])) {
      throw InvalidInput("max_engine_power: non-finite energies");
    }
  }
  const int d = static_cast<int>(eps1.size()) + 1;
  Vector e1(d), e2(d);
  e1[0] = e2[0] = 0.0;
  e1.tail(d - 1) = eps1;
  e2.tail(d - 1) = eps2;
  auto gibbs = [d](double beta, const Vector& e) {
    const double shift = e.minCoeff();
    Vector p = (-(beta * (e.array() - shift))).exp().matrix();
    return Vector(p / p.sum());
  };
  const Vector p1 = gibbs(model.beta1, e1);
  const Vector p2 = gibbs(model.beta2, e2);
  return (e1 - e2).dot(p1 - p2) / model.rate_denominator();
}

double log_dm1_from_qubits(int n) {
  if (n < 1) throw InvalidInput("qubit count must be >= 1");
  const double ln2 = std::log(2.0);
  if (n <= 50) return n * ln2 + std::log1p(-std::exp2(-static_cast<double>(n)));
  return n * ln2;
}

MachineOptimum optimize_engine_spectrum(const SimpleRelaxModel& model, double log_dm1) {
  model.validate();
  if (!std::isfinite(log_dm1)) throw InvalidInput("optimize_engine_spectrum: non-finite ln(d-1)");
  const EngineObjective f{log_dm1, model.beta1, model.beta2};

  Eigen::Vector2d w;
  if (log_dm1 > 2.0) {
    const double a1 = (model.beta2 - model.beta1) / model.beta2;
    const double a2 = (model.beta2 - model.beta1) / model.beta1;
    w = {-std::log(std::max(log_dm1 * a1, 1e-12)), std::log(std::max(log_dm1 * a2, 1e-12))};
  } else {
    double best = -1e300;
    for (double u1 = -3.0; u1 <= 8.0; u1 += 0.2) {
      for (double u2 = -3.0; u2 <= 8.0; u2 += 0.2) {
        const double v = f.value(u1, u2);
        if (v > best) {
          best = v;
          w = {u1, u2};
        }
      }
    }
  }

  const double scale = std::max(model.beta2 * std::max(1.0, std::abs(log_dm1)), 1.0);
  if (!newton_ascend(f, w, 1e-13 * scale)) {
    // Multi-start fallback over the shifted plane, then a final Newton polish.
    NelderMeadOptions nm;
    nm.ftol_abs = 1e-15 * scale;
    nm.max_evals = 4000;
    double best = -1e300;
    Eigen::Vector2d best_w = w;
    for (double u1 = -4.0; u1 <= 9.0; u1 += 1.3) {
      for (double u2 = -4.0; u2 <= 9.0; u2 += 1.3) {
        Vector x0(2);
        x0 << u1, u2;
        const auto r = nelder_mead([&](const Vector& x) { return -f.value(x[0], x[1]); }, x0, nm);
        if (-r.value > best) {
          best = -r.value;
          best_w = {r.x[0], r.x[1]};
        }
      }
    }
    w = best_w;
    if (!newton_ascend(f, w, 1e-13 * scale)) {
      throw OptimizationFailed("engine spectrum optimization did not reach stationarity");
    }
  }

  MachineOptimum out;
  out.kind = MachineKind::Engine;
  out.x1 = log_dm1 + w[0];
  out.x2 = log_dm1 + w[1];
  out.eps1 = out.x1 / model.beta1;
  out.eps2 = out.x2 / model.beta2;
  out.mu1 = optimal_split(model.Gamma1, model.Gamma2);
  out.objective = f.value(w[0], w[1]);
  out.power = out.objective / (model.beta1 * model.beta2) / model.rate_denominator();
  out.efficiency = 1.0 - model.beta1 * out.x2 / (model.beta2 * out.x1);
  return out;
}

MachineOptimum optimize_fridge_spectrum(const SimpleRelaxModel& model, double log_dm1) {
  model.validate();
  const double ln_z = log_dm1 - 1.0;  // z = (d-1)/e
  const double wl = (ln_z < 30.0) ? lambert_w(std::exp(ln_z)) : lambert_w_ln(ln_z);
  MachineOptimum out;
  out.kind = MachineKind::Refrigerator;
  out.eps1_infinite = true;
  out.eps1 = std::numeric_limits<double>::infinity();
  out.x2 = 1.0 + wl;
  out.eps2 = out.x2 / model.beta2;
  out.mu1 = optimal_split(model.Gamma1, model.Gamma2);
  out.objective = wl;
  out.power = wl / model.beta2 / model.rate_denominator();
  out.efficiency = 0.0;  // coefficient of performance eps2/(eps1-eps2) -> 0
  return out;
}

ManyQubitComparison many_qubit_compare(int n, const SimpleRelaxModel& model, MachineKind kind) {
  model.validate();
  if (n < 1) throw InvalidInput("many_qubit_compare: n must be >= 1");
  const double s_single = 0.0;  // d = 2
  const double s_many = log_dm1_from_qubits(n);
  const double ln2 = std::log(2.0);

  ManyQubitComparison out;
  if (kind == MachineKind::Engine) {
    out.gap_noninteracting = n * optimize_engine_spectrum(model, s_single).power;
    out.gap_interacting = optimize_engine_spectrum(model, s_many).power;
    out.asymptote = ln2 * (1.0 / model.beta1 - 1.0 / model.beta2) / model.rate_denominator() * n;
  } else {
    out.gap_noninteracting = n * optimize_fridge_spectrum(model, s_single).power;
    out.gap_interacting = optimize_fridge_spectrum(model, s_many).power;
    out.asymptote = ln2 / model.beta2 / model.rate_denominator() * n;
  }
  out.ratio = out.gap_interacting / out.gap_noninteracting;
  return out;
}

EfficiencyReport efficiency_at_max_power(int n, double beta1, double beta2) {
  SimpleRelaxModel model{beta1, beta2, 1.0, 1.0};
  const MachineOptimum opt = optimize_engine_spectrum(model, log_dm1_from_qubits(n));
  EfficiencyReport rep;
  rep.eta = opt.efficiency;
  rep.carnot_gap = (1.0 - beta1 / beta2) - opt.efficiency;
  rep.predicted_gap = (2.0 / std::log(2.0)) * (beta1 / beta2) * std::log(static_cast<double>(n)) / n;
  return rep;
}

double engine_small_dt_coefficient(int points) {
  if (points < 2) throw InvalidInput("engine_small_dt_coefficient: need >= 2 points");
  const double lo = 1e-3, hi = 1e-2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < points; ++i) {
    const double u = lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1));
    const double T1 = 1.0 + u / 2.0, T2 = 1.0 - u / 2.0;  // Tbar = 1
    SimpleRelaxModel m{1.0 / T1, 1.0 / T2, 1.0, 1.0};
    const double P = optimize_engine_spectrum(m, 0.0).power;
    const double x = std::log(u), y = std::log(std::abs(P));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (points * sxy - sx * sy) / (points * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / points;
  return std::exp(intercept);  // Tbar = 1, so c0 = e^intercept
}

Eigen::Vector2d engine_stationarity_residual(double x1, double x2, double beta1, double beta2,
                                             double dm1) {
  const double D = dm1;
  const double e1 = std::exp(x1), e2 = std::exp(x2);
  Eigen::Vector2d r;
  r[0] = beta1 * e1 * (D + e2) * x2 -
         beta2 * (e1 * e1 - D * e2 + e1 * e2 * (x1 - 1.0) + D * e1 * (1.0 + x1));
  r[1] = beta2 * e2 * (D + e1) * x1 -
         beta1 * (e2 * e2 - D * e1 + e1 * e2 * (x2 - 1.0) + D * e2 * (1.0 + x2));
  return r;
}

}  // namespace ottoforge
