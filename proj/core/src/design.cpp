#include "lassocv/design.hpp"

#include <cmath>
#include <utility>

#include "lassocv/rng.hpp"

namespace lassocv {

DesignSpec DesignSpec::replicated_block(std::vector<Eigen::VectorXd> rows, int n) {
  DesignSpec spec;
  spec.family = DesignFamily::ReplicatedBlock;
  spec.n = n;
  spec.p = rows.empty() ? 0 : static_cast<int>(rows.front().size());
  spec.base_rows = std::move(rows);
  return spec;
}

DesignSpec DesignSpec::bounded_ball(double radius, int n, int p, std::uint64_t seed) {
  DesignSpec spec;
  spec.family = DesignFamily::BoundedBall;
  spec.n = n;
  spec.p = p;
  spec.radius = radius;
  spec.seed = seed;
  return spec;
}

DesignSpec DesignSpec::scaled_orthogonal(int n, int p) {
  DesignSpec spec;
  spec.family = DesignFamily::ScaledOrthogonal;
  spec.n = n;
  spec.p = p;
  return spec;
}

DesignSpec DesignSpec::with_n(int n) const {
  DesignSpec copy = *this;
  copy.n = n;
  return copy;
}

DesignMatrix DesignMatrix::from_rows(Eigen::MatrixXd rows, double c_x_bound) {
  const auto n = rows.rows();
  const auto p = rows.cols();
  if (n <= 0 || p <= 0) {
    throw DimensionMismatch("design must have positive dimensions");
  }

  DesignMatrix design;
  design.gram_ = (rows.transpose() * rows) / static_cast<double>(n);
  design.gram_ = 0.5 * (design.gram_ + design.gram_.transpose().eval());  // exact symmetry

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(design.gram_);
  design.gram_min_eig_ = eig.eigenvalues().minCoeff();
  design.gram_max_eig_ = eig.eigenvalues().maxCoeff();

  const double rank_tol =
      1e-12 * std::max(1.0, design.gram_max_eig_) * static_cast<double>(p);
  if (n < p || design.gram_min_eig_ <= rank_tol) {
    throw RankDeficient("design does not have full column rank");
  }

  double max_row_norm = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    max_row_norm = std::max(max_row_norm, rows.row(i).norm());
  }
  design.c_x_bound_ = (c_x_bound > 0.0) ? c_x_bound : max_row_norm;
  if (max_row_norm > design.c_x_bound_ * (1.0 + 1e-12)) {
    throw DimensionMismatch("row norm exceeds the declared bound");
  }
  design.rows_ = std::move(rows);
  return design;
}

DesignMatrix DesignMatrix::without_row(int i) const {
  if (i < 0 || i >= n()) {
    throw DimensionMismatch("row index out of range");
  }
  Eigen::MatrixXd reduced(n() - 1, p());
  reduced.topRows(i) = rows_.topRows(i);
  reduced.bottomRows(n() - 1 - i) = rows_.bottomRows(n() - 1 - i);
  try {
    return from_rows(std::move(reduced), c_x_bound_);
  } catch (const RankDeficient&) {
    throw RankDeficientFold("removing a row breaks full column rank");
  }
}

namespace {

DesignMatrix build_replicated(const std::vector<Eigen::VectorXd>& base, int n, int p) {
  if (base.empty() || p <= 0) {
    throw DimensionMismatch("replicated block needs at least one base row");
  }
  const int block = static_cast<int>(base.size());
  if (n <= 0 || n % block != 0) {
    throw BadBlockSize("n must be a positive multiple of the base block length");
  }
  for (const auto& row : base) {
    if (static_cast<int>(row.size()) != p) {
      throw DimensionMismatch("base rows disagree on dimension");
    }
  }
  Eigen::MatrixXd rows(n, p);
  for (int i = 0; i < n; ++i) {
    rows.row(i) = base[i % block].transpose();
  }
  return DesignMatrix::from_rows(std::move(rows));
}

// One engine per row, keyed by (spec seed, row index): designs of different
// n share a prefix, which keeps growing-n experiments nested.
Eigen::VectorXd ball_row(int p, double radius, std::uint64_t row_seed) {
  Rng rng(row_seed);
  Eigen::VectorXd direction(p);
  for (int j = 0; j < p; ++j) {
    direction[j] = rng.gaussian();
  }
  const double norm = direction.norm();
  if (norm == 0.0) {
    return Eigen::VectorXd::Zero(p);
  }
  const double u = rng.uniform01_open_left();
  const double scale = radius * std::pow(u, 1.0 / static_cast<double>(p));
  return direction * (scale / norm);
}

}  // namespace

DesignMatrix generate_design(const DesignSpec& spec) {
  switch (spec.family) {
    case DesignFamily::ReplicatedBlock:
      return build_replicated(spec.base_rows, spec.n, spec.p);
    case DesignFamily::ScaledOrthogonal: {
      if (spec.p <= 0) {
        throw DimensionMismatch("p must be positive");
      }
      std::vector<Eigen::VectorXd> base(spec.p);
      const double scale = std::sqrt(static_cast<double>(spec.p));
      for (int j = 0; j < spec.p; ++j) {
        base[j] = Eigen::VectorXd::Zero(spec.p);
        base[j][j] = scale;
      }
      return build_replicated(base, spec.n, spec.p);
    }
    case DesignFamily::BoundedBall: {
      if (spec.radius <= 0.0 || !std::isfinite(spec.radius)) {
        throw DimensionMismatch("ball radius must be positive and finite");
      }
      if (spec.n <= 0 || spec.p <= 0) {
        throw DimensionMismatch("design must have positive dimensions");
      }
      Eigen::MatrixXd rows(spec.n, spec.p);
      for (int i = 0; i < spec.n; ++i) {
        rows.row(i) =
            ball_row(spec.p, spec.radius,
                     derive_seed(spec.seed, "ball-row", static_cast<std::uint64_t>(i)))
                .transpose();
      }
      return DesignMatrix::from_rows(std::move(rows), spec.radius);
    }
  }
  throw DimensionMismatch("unknown design family");
}

GramInfo gram_matrix(const DesignMatrix& design) {
  return {design.gram(), design.gram_min_eigenvalue()};
}

Eigen::VectorXd sample_noise(const NoiseFamily& family, int n, std::uint64_t seed) {
  if (n < 1) {
    throw DimensionMismatch("n must be at least 1");
  }
  Rng rng(seed);
  Eigen::VectorXd draw(n);
  switch (family.kind) {
    case NoiseFamily::Kind::StandardGaussian:
      for (int i = 0; i < n; ++i) draw[i] = rng.gaussian();
      break;
    case NoiseFamily::Kind::Rademacher:
      for (int i = 0; i < n; ++i) draw[i] = rng.rademacher();
      break;
    case NoiseFamily::Kind::UniformUnitVariance:
      for (int i = 0; i < n; ++i) draw[i] = rng.uniform_unit_variance();
      break;
  }
  return draw;
}

GroundTruth GroundTruth::make(Eigen::VectorXd theta, double sigma, NoiseFamily noise) {
  GroundTruth truth;
  truth.l1_bound = theta.lpNorm<1>();
  truth.theta = std::move(theta);
  truth.sigma = sigma;
  truth.noise = noise;
  return truth;
}

Dataset realize(const DesignMatrix& design, const GroundTruth& truth, std::uint64_t seed) {
  if (design.p() != static_cast<int>(truth.theta.size())) {
    throw DimensionMismatch("theta length must equal the design column count");
  }
  Eigen::VectorXd noise_draw = sample_noise(truth.noise, design.n(), seed);
  Eigen::VectorXd response = design.matrix() * truth.theta + truth.sigma * noise_draw;
  return Dataset{design, std::move(response), std::move(noise_draw), truth, seed};
}

}  // namespace lassocv
