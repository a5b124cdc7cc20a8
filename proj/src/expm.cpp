#include "ottoforge/expm.hpp"

#include <unsupported/Eigen/MatrixFunctions>

namespace ottoforge {

Matrix expm(const Matrix& A) {
  const int d = static_cast<int>(A.rows());
  Eigen::EigenSolver<Matrix> es(A);
  if (es.info() == Eigen::Success) {
    const Eigen::MatrixXcd V = es.eigenvectors();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(V);
    const double smin = svd.singularValues()(d - 1);
    const double smax = svd.singularValues()(0);
    if (smin > 0.0 && smax / smin < 1e6) {
      const Eigen::VectorXcd el = es.eigenvalues().array().exp();
      const Eigen::MatrixXcd R = V * el.asDiagonal() * V.inverse();
      return R.real();
    }
  }
  return A.exp();
}

Matrix expm_integral(const Matrix& A, double tau) {
  const int d = static_cast<int>(A.rows());
  Matrix B = Matrix::Zero(2 * d, 2 * d);
  B.topLeftCorner(d, d) = A * tau;
  B.topRightCorner(d, d) = Matrix::Identity(d, d) * tau;
  const Matrix E = B.exp();
  return E.topRightCorner(d, d);
}

}  // namespace ottoforge
