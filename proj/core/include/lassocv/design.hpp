#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "lassocv/errors.hpp"

namespace lassocv {

enum class DesignFamily { ReplicatedBlock, BoundedBall, ScaledOrthogonal };

/// Recipe for an n x p design. ReplicatedBlock cycles a fixed set of base
/// rows (so the Gram matrix is exactly the average of their outer products
/// for every block-multiple n); BoundedBall samples rows uniformly in the
/// ball of the given radius with a per-row seed scheme, so designs of
/// different n are nested; ScaledOrthogonal cycles sqrt(p) * e_j, giving
/// X^T X = n I exactly.
struct DesignSpec {
  DesignFamily family = DesignFamily::ReplicatedBlock;
  int n = 0;
  int p = 0;
  std::vector<Eigen::VectorXd> base_rows;  // ReplicatedBlock only
  double radius = 1.0;                     // BoundedBall only
  std::uint64_t seed = 0;                  // BoundedBall only

  static DesignSpec replicated_block(std::vector<Eigen::VectorXd> rows, int n);
  static DesignSpec bounded_ball(double radius, int n, int p, std::uint64_t seed);
  static DesignSpec scaled_orthogonal(int n, int p);

  /// Same family and parameters, different sample size.
  DesignSpec with_n(int n) const;
};

/// Immutable full-column-rank design with rows bounded in Euclidean norm.
/// Caches the Gram matrix (1/n) X^T X and its extremal eigenvalues.
class DesignMatrix {
 public:
  /// Validates rank and row-norm bound; throws RankDeficient.
  /// c_x_bound defaults to the realized max row norm.
  static DesignMatrix from_rows(Eigen::MatrixXd rows, double c_x_bound = -1.0);

  int n() const { return static_cast<int>(rows_.rows()); }
  int p() const { return static_cast<int>(rows_.cols()); }
  const Eigen::MatrixXd& matrix() const { return rows_; }
  Eigen::VectorXd row(int i) const { return rows_.row(i).transpose(); }
  double c_x_bound() const { return c_x_bound_; }
  const Eigen::MatrixXd& gram() const { return gram_; }
  double gram_min_eigenvalue() const { return gram_min_eig_; }
  double gram_max_eigenvalue() const { return gram_max_eig_; }

  /// Copy with row i removed. Throws RankDeficientFold if the remaining
  /// rows lose full column rank.
  DesignMatrix without_row(int i) const;

 private:
  DesignMatrix() = default;
  Eigen::MatrixXd rows_;
  Eigen::MatrixXd gram_;
  double c_x_bound_ = 0.0;
  double gram_min_eig_ = 0.0;
  double gram_max_eig_ = 0.0;
};

struct GramInfo {
  Eigen::MatrixXd gram;
  double min_eigenvalue;
};

struct NoiseFamily {
  enum class Kind { StandardGaussian, Rademacher, UniformUnitVariance };
  Kind kind = Kind::StandardGaussian;
  /// Sub-Gaussian proxy parameter: E e^{tW} <= e^{tau^2 t^2 / 2}.
  double tau = 1.0;

  static NoiseFamily gaussian() { return {Kind::StandardGaussian, 1.0}; }
  static NoiseFamily rademacher() { return {Kind::Rademacher, 1.0}; }
  // Uniform on [-sqrt(3), sqrt(3)]; tau from the bounded-variable bound.
  static NoiseFamily uniform() { return {Kind::UniformUnitVariance, 1.7320508075688772}; }
};

struct GroundTruth {
  Eigen::VectorXd theta;
  double sigma = 1.0;
  NoiseFamily noise;
  double l1_bound = 0.0;  // defaults to ||theta||_1 when constructed via make()

  static GroundTruth make(Eigen::VectorXd theta, double sigma, NoiseFamily noise);
};

struct Dataset {
  DesignMatrix design;
  Eigen::VectorXd response;
  Eigen::VectorXd noise_draw;
  std::optional<GroundTruth> truth;
  std::uint64_t seed = 0;

  int n() const { return design.n(); }
  int p() const { return design.p(); }
};

/// Builds the design for the spec. Throws BadBlockSize or RankDeficient.
DesignMatrix generate_design(const DesignSpec& spec);

GramInfo gram_matrix(const DesignMatrix& design);

/// n i.i.d. draws from the family, reproducible under the seed.
Eigen::VectorXd sample_noise(const NoiseFamily& family, int n, std::uint64_t seed);

/// Realizes Y = X theta + sigma W with W drawn from truth.noise under seed.
Dataset realize(const DesignMatrix& design, const GroundTruth& truth, std::uint64_t seed);

}  // namespace lassocv
