#include "ottoforge/generator.hpp"

#include <cmath>

namespace ottoforge {

std::string to_string(BathFamily f) {
  switch (f) {
    case BathFamily::FermionicFlat: return "fermionic-flat";
    case BathFamily::BosonicOhmic: return "bosonic-ohmic";
    case BathFamily::FixedRate: return "fixed-rate";
    case BathFamily::Peaked: return "peaked";
  }
  return "?";
}

BathFamily bath_family_from_string(const std::string& s) {
  if (s == "fermionic-flat") return BathFamily::FermionicFlat;
  if (s == "bosonic-ohmic") return BathFamily::BosonicOhmic;
  if (s == "fixed-rate") return BathFamily::FixedRate;
  if (s == "peaked") return BathFamily::Peaked;
  throw InvalidInput("unknown bath family '" + s + "'");
}

Vector gibbs_populations(double beta, const Spectrum& spectrum) {
  if (!std::isfinite(beta) || beta < 0.0) throw InvalidInput("gibbs_populations: beta must be finite and >= 0");
  const Vector& e = spectrum.energies;
  const double shift = e.minCoeff();
  Vector p = (-(beta * (e.array() - shift))).exp().matrix();
  const double z = p.sum();
  return p / z;
}

namespace {

// Downhill rate of the (lo, hi) level pair for the given family; the uphill
// direction is derived as exp(-beta*de) * downhill. For de == 0 the two
// directions coincide (fermionic gamma/2, bosonic gamma/beta limit).
double downhill_rate(BathFamily family, double gamma, double beta, double de) {
  switch (family) {
    case BathFamily::FermionicFlat:
      return gamma / (std::exp(-beta * de) + 1.0);
    case BathFamily::BosonicOhmic: {
      if (de == 0.0) return gamma / beta;
      return gamma * de / (-std::expm1(-beta * de));
    }
    default:
      throw InvalidInput("downhill_rate: family has no pairwise rate formula");
  }
}

bool peaked_on_target(const Spectrum& spectrum, const BathModel& bath) {
  for (int i = 0; i + 1 < spectrum.dimension(); ++i) {
    if (std::abs(spectrum.energies[i + 1] - bath.targets[i]) > bath.match_tol) return false;
  }
  return true;
}

}  // namespace

RateMatrix build_rate_matrix(const Spectrum& spectrum, const BathModel& bath) {
  const int d = spectrum.dimension();
  bath.validate(d);
  Matrix g = Matrix::Zero(d, d);

  switch (bath.family) {
    case BathFamily::FermionicFlat:
    case BathFamily::BosonicOhmic: {
      for (int n = 0; n < d; ++n) {
        for (int m = n + 1; m < d; ++m) {
          const double en = spectrum.energies[n], em = spectrum.energies[m];
          if (bath.family == BathFamily::BosonicOhmic && !std::isfinite(bath.beta * (em - en))) {
            throw InvalidInput("bosonic rate with non-finite beta*(e_m - e_n)");
          }
          const int lo = (en <= em) ? n : m;
          const int hi = (en <= em) ? m : n;
          const double de = spectrum.energies[hi] - spectrum.energies[lo];
          const double down = downhill_rate(bath.family, bath.gamma, bath.beta, de);
          g(hi, lo) = down;
          g(lo, hi) = std::exp(-bath.beta * de) * down;
        }
      }
      break;
    }
    case BathFamily::Peaked: {
      if (peaked_on_target(spectrum, bath)) {
        for (const auto& p : bath.pair_rates) {
          g(p.from, p.to) = p.rate;
          // Gamma_{to->from} = exp(beta (e_to - e_from)) Gamma_{from->to}
          g(p.to, p.from) =
              std::exp(bath.beta * (spectrum.energies[p.to] - spectrum.energies[p.from])) * p.rate;
        }
      }
      break;
    }
    case BathFamily::FixedRate:
      throw InvalidInput("fixed-rate bath has no rate matrix; use build_generator");
  }
  return RateMatrix{std::move(g)};
}

PauliGenerator generator_from_rates(const RateMatrix& rates, const Vector& gibbs) {
  const int d = static_cast<int>(rates.gamma.rows());
  Matrix full = Matrix::Zero(d, d);
  for (int n = 0; n < d; ++n) {
    double out = 0.0;
    for (int m = 0; m < d; ++m) {
      if (m == n) continue;
      full(m, n) = rates.gamma(n, m);  // inflow into m from n
      out += rates.gamma(n, m);
    }
    full(n, n) = -out;
  }
  // Reduced form: dp_hat/dt = G (p_hat_eq - p_hat) with
  // G = c * 1^T - D, where full = [[a, b^T], [c, D]].
  Matrix reduced(d - 1, d - 1);
  const Vector c = full.block(1, 0, d - 1, 1);
  const Matrix D = full.block(1, 1, d - 1, d - 1);
  reduced = c * Eigen::RowVectorXd::Ones(d - 1) - D;
  return PauliGenerator{std::move(full), std::move(reduced), gibbs};
}

PauliGenerator build_generator(const Spectrum& spectrum, const BathModel& bath) {
  const int d = spectrum.dimension();
  bath.validate(d);
  const Vector g = gibbs_populations(bath.beta, spectrum);
  if (bath.family == BathFamily::FixedRate) {
    Matrix full = bath.rate * (g * Eigen::RowVectorXd::Ones(d) - Matrix::Identity(d, d));
    Matrix reduced = bath.rate * Matrix::Identity(d - 1, d - 1);
    return PauliGenerator{std::move(full), std::move(reduced), g};
  }
  return generator_from_rates(build_rate_matrix(spectrum, bath), g);
}

}  // namespace ottoforge
