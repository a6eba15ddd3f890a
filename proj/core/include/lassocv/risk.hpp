#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "lassocv/design.hpp"
#include "lassocv/lasso_path.hpp"

namespace lassocv {

struct RiskEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Common-random-numbers Monte-Carlo engine for the predictive risk
/// (1/n) E ||X (theta_hat(lambda) - theta)||_2^2 + sigma^2.
///
/// One solution path is computed per replicate (child seeds derived from the
/// context seed and the replicate index), and every lambda is evaluated on
/// those same paths. Replicates are reduced in ascending order, so results
/// are bit-stable.
class RiskContext {
 public:
  RiskContext(const DesignMatrix& design, const GroundTruth& truth, int m_draws,
              std::uint64_t seed);

  int m_draws() const { return m_draws_; }
  std::uint64_t seed() const { return seed_; }
  const DesignMatrix& design() const { return design_; }
  const GroundTruth& truth() const { return truth_; }
  const std::vector<LassoPath>& replicate_paths() const { return paths_; }

  /// Mean and standard error of ||theta_hat(lambda) - theta||_{C_n}^2 + sigma^2.
  RiskEstimate estimate_at(double lambda) const;

  /// Paired gap estimate risk(lambda_a) - risk(lambda_b) on the shared draws.
  RiskEstimate paired_gap(double lambda_a, double lambda_b) const;

  /// Largest lambda_max realized across the replicate paths.
  double max_lambda_max() const;

 private:
  DesignMatrix design_;
  GroundTruth truth_;
  int m_draws_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<LassoPath> paths_;

  double weighted_error(const LassoPath& path, double lambda) const;
};

struct RiskCurve {
  std::vector<double> lambdas;  // ascending grid
  std::vector<double> estimates;
  std::vector<double> std_errors;
  double lambda_star = 0.0;  // grid argmin, ties toward the largest lambda
  int m_draws = 0;
  std::uint64_t seed = 0;
};

RiskEstimate risk_at(const DesignMatrix& design, const GroundTruth& truth, double lambda,
                     int m_draws, std::uint64_t seed);

RiskCurve risk_curve(const RiskContext& context, const std::vector<double>& lambda_grid);
RiskCurve risk_curve(const DesignMatrix& design, const GroundTruth& truth,
                     const std::vector<double>& lambda_grid, int m_draws, std::uint64_t seed);

/// Paired-comparison estimate of risk(lambda_hat) - risk(lambda_star) on the
/// context's draws; exactly zero when the two lambdas coincide.
RiskEstimate risk_gap(const RiskContext& context, double lambda_hat, double lambda_star);

/// Default oracle-search grid: {0}, a geometric ladder on (0, lambda_top],
/// and any extra structural points (path knots, a CV minimizer), deduped and
/// ascending.
std::vector<double> default_lambda_grid(double lambda_top, int resolution,
                                        const std::vector<double>& extra_points = {});

}  // namespace lassocv
