#include "lassocv/coordinate_descent.hpp"

#include <cmath>

#include "lassocv/errors.hpp"
#include "lassocv/lasso_path.hpp"

namespace lassocv {

namespace {

double soft_threshold(double value, double threshold) {
  if (value > threshold) return value - threshold;
  if (value < -threshold) return value + threshold;
  return 0.0;
}

}  // namespace

Eigen::VectorXd solve_lasso_at(const DesignMatrix& design, const Eigen::VectorXd& response,
                               double lambda, double tolerance) {
  const Eigen::MatrixXd& x = design.matrix();
  const int n = design.n();
  const int p = design.p();
  if (response.size() != n) {
    throw DimensionMismatch("response length must equal the design row count");
  }
  if (lambda < 0.0 || tolerance <= 0.0) {
    throw DimensionMismatch("lambda must be >= 0 and tolerance > 0");
  }

  // Per-coordinate curvature (1/n)||x_j||^2; positive since rank is full.
  Eigen::VectorXd curvature(p);
  for (int j = 0; j < p; ++j) {
    curvature[j] = x.col(j).squaredNorm() / static_cast<double>(n);
  }

  Eigen::VectorXd theta = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd residual = response;  // Y - X theta
  const double update_tol = tolerance / 10.0;
  constexpr long kMaxSweeps = 100000;

  for (long sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double max_update = 0.0;
    for (int j = 0; j < p; ++j) {
      const double old = theta[j];
      const double rho = x.col(j).dot(residual) / static_cast<double>(n) + curvature[j] * old;
      const double updated = soft_threshold(rho, lambda) / curvature[j];
      if (updated != old) {
        residual -= (updated - old) * x.col(j);
        theta[j] = updated;
        max_update = std::max(max_update, std::abs(updated - old));
      }
    }
    if (max_update < update_tol) {
      if (kkt_residual(design, response, lambda, theta).max_violation <= tolerance) {
        return theta;
      }
    }
  }
  throw NoConvergence("coordinate descent hit the sweep cap");
}

}  // namespace lassocv
