#include "ottoforge/caratheodory.hpp"

#include <cmath>
#include <numeric>

#include "ottoforge/errors.hpp"

namespace ottoforge {

CaratheodoryResult caratheodory_reduce(const std::vector<Vector>& points,
                                       const std::vector<double>& weights) {
  if (points.empty() || points.size() != weights.size()) {
    throw InvalidInput("caratheodory_reduce: points/weights size mismatch");
  }
  const int D = static_cast<int>(points.front().size());
  double max_norm = 0.0;
  double wsum = 0.0;
  Vector com = Vector::Zero(D);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != D) throw InvalidInput("caratheodory_reduce: ragged point dimensions");
    if (!(weights[i] > 0.0)) throw InvalidInput("caratheodory_reduce: weights must be > 0");
    max_norm = std::max(max_norm, points[i].norm());
    wsum += weights[i];
    com += weights[i] * points[i];
  }
  if (std::abs(wsum - 1.0) > 1e-9) throw InvalidInput("caratheodory_reduce: weights must sum to 1");
  if (com.norm() > 1e-10 * std::max(max_norm, 1e-300)) {
    throw InvalidInput("caratheodory_reduce: input center of mass is not zero");
  }

  std::vector<int> idx(points.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<double> w = weights;

  while (static_cast<int>(idx.size()) > D + 1) {
    const int k = static_cast<int>(idx.size());
    // Null affine combination: kernel of [points; ones], full pivoting.
    Matrix S(D + 1, k);
    for (int j = 0; j < k; ++j) {
      S.block(0, j, D, 1) = points[idx[j]];
      S(D, j) = 1.0;
    }
    Eigen::FullPivLU<Matrix> lu(S);
    lu.setThreshold(1e-12);
    const Matrix kernel = lu.kernel();
    if (kernel.cols() == 0 || kernel.col(0).cwiseAbs().maxCoeff() == 0.0) {
      // Points affinely independent beyond numerical resolution; stop.
      break;
    }
    Vector xi = kernel.col(0);
    if (xi.maxCoeff() <= 0.0) xi = -xi;

    double c = std::numeric_limits<double>::infinity();
    int drop = -1;
    for (int j = 0; j < k; ++j) {
      if (xi[j] > 0.0) {
        const double cand = w[idx[j]] / xi[j];
        if (cand < c) {
          c = cand;
          drop = j;
        }
      }
    }
    if (drop < 0) break;

    std::vector<int> next_idx;
    for (int j = 0; j < k; ++j) {
      const double nw = w[idx[j]] - c * xi[j];
      if (j == drop || nw <= 0.0) continue;
      w[idx[j]] = nw;
      next_idx.push_back(idx[j]);
    }
    idx = std::move(next_idx);
  }

  CaratheodoryResult out;
  double total = 0.0;
  for (int i : idx) total += w[i];
  for (int i : idx) {
    out.points.push_back(points[i]);
    out.weights.push_back(w[i] / total);
    out.indices.push_back(i);
  }
  return out;
}

}  // namespace ottoforge
