#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <vector>

#include "ottoforge/types.hpp"

namespace ottoforge {

struct NelderMeadOptions {
  double ftol_abs = 1e-10;
  int max_evals = 2000;
  double initial_step = 0.5;
};

struct NelderMeadResult {
  Vector x;
  double value = 0.0;
  int evals = 0;
  bool converged = false;
};

/// Downhill simplex with the adaptive (dimension-dependent) coefficients.
/// Fully deterministic: ties resolve by vertex index.
inline NelderMeadResult nelder_mead(const std::function<double(const Vector&)>& f, Vector x0,
                                    const NelderMeadOptions& opt = {}) {
  const int n = static_cast<int>(x0.size());
  const double alpha = 1.0;
  const double beta = 1.0 + 2.0 / n;
  const double gamma = 0.75 - 1.0 / (2.0 * n);
  const double delta = 1.0 - 1.0 / n;

  std::vector<Vector> xs(n + 1, x0);
  for (int i = 0; i < n; ++i) xs[i + 1][i] += opt.initial_step;
  std::vector<double> fs(n + 1);
  int evals = 0;
  for (int i = 0; i <= n; ++i) fs[i] = (++evals, f(xs[i]));

  std::vector<int> order(n + 1);
  auto sort_vertices = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return fs[a] < fs[b]; });
  };

  NelderMeadResult res;
  while (evals < opt.max_evals) {
    sort_vertices();
    const int best = order[0], worst = order[n], second = order[n - 1];
    if (fs[worst] - fs[best] <= opt.ftol_abs) {
      res.converged = true;
      break;
    }
    Vector centroid = Vector::Zero(n);
    for (int i = 0; i <= n; ++i) {
      if (i != worst) centroid += xs[i];
    }
    centroid /= n;

    const Vector xr = centroid + alpha * (centroid - xs[worst]);
    const double fr = (++evals, f(xr));
    if (fr < fs[best]) {
      const Vector xe = centroid + beta * (xr - centroid);
      const double fe = (++evals, f(xe));
      if (fe < fr) {
        xs[worst] = xe;
        fs[worst] = fe;
      } else {
        xs[worst] = xr;
        fs[worst] = fr;
      }
    } else if (fr < fs[second]) {
      xs[worst] = xr;
      fs[worst] = fr;
    } else {
      const bool outside = fr < fs[worst];
      Vector xc;
      if (outside) {
        xc = centroid + gamma * (xr - centroid);
      } else {
        xc = centroid - gamma * (centroid - xs[worst]);
      }
      const double fc = (++evals, f(xc));
      if (fc < (outside ? fr : fs[worst])) {
        xs[worst] = xc;
        fs[worst] = fc;
      } else {
        for (int i = 0; i <= n; ++i) {
          if (i == best) continue;
          xs[i] = xs[best] + delta * (xs[i] - xs[best]);
          fs[i] = (++evals, f(xs[i]));
          if (evals >= opt.max_evals) break;
        }
      }
    }
  }
  sort_vertices();
  res.x = xs[order[0]];
  res.value = fs[order[0]];
  res.evals = evals;
  return res;
}

}  // namespace ottoforge
