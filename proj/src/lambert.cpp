#include "ottoforge/lambert.hpp"

#include <cmath>

#include "ottoforge/errors.hpp"

namespace ottoforge {

double lambert_w(double z) {
  if (!std::isfinite(z)) throw InvalidInput("lambert_w: non-finite argument");
  const double branch_point = -std::exp(-1.0);
  if (z < branch_point) {
    if (z > branch_point * (1.0 + 1e-14)) {
      z = branch_point;  // rounding at the branch point
    } else {
      throw InvalidInput("lambert_w: argument below -1/e");
    }
  }
  if (z == 0.0) return 0.0;

  double w;
  if (z < -0.25) {
    const double p = std::sqrt(2.0 * (std::exp(1.0) * z + 1.0));
    w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
  } else if (z < std::exp(1.0)) {
    w = z / (1.0 + z);
  } else {
    const double l1 = std::log(z);
    const double l2 = std::log(l1);
    w = l1 - l2 + l2 / l1;
  }

  for (int it = 0; it < 80; ++it) {
    const double ew = std::exp(w);
    const double fv = w * ew - z;
    const double fp = ew * (1.0 + w);
    const double fpp = ew * (2.0 + w);
    const double denom = fp - 0.5 * fv * fpp / fp;
    if (denom == 0.0) break;
    const double dw = fv / denom;
    w -= dw;
    if (std::abs(dw) <= 1e-16 * (1.0 + std::abs(w))) break;
  }
  return w;
}

double lambert_w_ln(double ln_z) {
  if (!std::isfinite(ln_z)) throw InvalidInput("lambert_w_ln: non-finite argument");
  if (ln_z < 1.0) return lambert_w(std::exp(ln_z));
  double w = ln_z - std::log(ln_z);
  if (w < 1.0) w = 1.0;
  for (int it = 0; it < 60; ++it) {
    const double g = w + std::log(w) - ln_z;
    const double dw = g / (1.0 + 1.0 / w);
    w -= dw;
    if (std::abs(dw) <= 1e-16 * (1.0 + std::abs(w))) break;
  }
  return w;
}

}  // namespace ottoforge
