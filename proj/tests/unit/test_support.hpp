#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "lassocv/design.hpp"
#include "lassocv/rng.hpp"

namespace lassocv::testsupport {

/// Seeded random problem instance: a bounded-ball design (radius 2), a
/// half-sparse Gaussian target and Gaussian noise.
inline Dataset random_instance(std::uint64_t seed, int max_n, int max_p) {
  Rng rng(derive_seed(seed, "instance"));
  const int p = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(max_p));
  const int n_lo = std::max(3 * p, 12);
  const int n =
      n_lo + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(max_n - n_lo + 1));
  const DesignMatrix design =
      generate_design(DesignSpec::bounded_ball(2.0, n, p, derive_seed(seed, "design")));
  Eigen::VectorXd theta(p);
  for (int j = 0; j < p; ++j) {
    theta[j] = rng.uniform01() < 0.5 ? 0.0 : 2.0 * rng.gaussian();
  }
  const double sigma = 0.3 + 1.2 * rng.uniform01();
  const GroundTruth truth = GroundTruth::make(theta, sigma, NoiseFamily::gaussian());
  return realize(design, truth, derive_seed(seed, "noise"));
}

/// The worked two-point dataset: X = {(1), (1)}, Y = (2, 4).
inline Dataset two_point_dataset() {
  Eigen::MatrixXd rows(2, 1);
  rows << 1.0, 1.0;
  Eigen::VectorXd response(2);
  response << 2.0, 4.0;
  return Dataset{DesignMatrix::from_rows(rows), response, Eigen::VectorXd::Zero(2), std::nullopt,
                 0};
}

/// Independent least-squares oracle (QR, a different route than the
/// library's Cholesky solves).
inline Eigen::VectorXd least_squares_qr(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  return x.colPivHouseholderQr().solve(y);
}

}  // namespace lassocv::testsupport
