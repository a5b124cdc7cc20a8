#pragma once

#include <vector>

#include "ottoforge/types.hpp"

namespace ottoforge {

struct CaratheodoryResult {
  std::vector<Vector> points;
  std::vector<double> weights;
  std::vector<int> indices;  // positions of the kept points in the input
};

/// Reduce a convex combination with zero weighted sum to at most D+1 points
/// by iterated elimination of null affine combinations. Input: points in R^D
/// and strictly positive weights summing to 1 with ||sum w_i v_i|| <=
/// 1e-10 * max ||v_i||. Ties in the elimination step break toward the lowest
/// index.
CaratheodoryResult caratheodory_reduce(const std::vector<Vector>& points,
                                       const std::vector<double>& weights);

}  // namespace ottoforge
