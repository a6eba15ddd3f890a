#pragma once

#include <Eigen/Dense>

#include "lassocv/design.hpp"

namespace lassocv {

/// Cyclic coordinate descent for (1/2n)||Y - X theta||_2^2 + lambda||theta||_1.
///
/// Deterministic by contract: sweeps coordinates in index order, warm-starts
/// from the zero vector, and stops once the largest coordinate update in a
/// sweep falls below tolerance/10 AND the subgradient residual is within
/// tolerance. Throws NoConvergence after 1e5 sweeps.
///
/// This solver is kept independent of the homotopy path machinery so the two
/// can certify each other.
Eigen::VectorXd solve_lasso_at(const DesignMatrix& design, const Eigen::VectorXd& response,
                               double lambda, double tolerance);

}  // namespace lassocv
