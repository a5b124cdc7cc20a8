#pragma once

#include "ottoforge/types.hpp"

namespace ottoforge {

/// exp(A). Eigendecomposition when the eigenvector basis is well conditioned
/// (cond < 1e6), scaling-and-squaring Pade otherwise; rate matrices can be
/// defective near degeneracies.
Matrix expm(const Matrix& A);

/// Integral of exp(A s) ds over [0, tau], via the augmented-block exponential.
Matrix expm_integral(const Matrix& A, double tau);

}  // namespace ottoforge
