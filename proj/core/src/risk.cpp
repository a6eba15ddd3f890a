#include "lassocv/risk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lassocv/errors.hpp"
#include "lassocv/rng.hpp"

namespace lassocv {

RiskContext::RiskContext(const DesignMatrix& design, const GroundTruth& truth, int m_draws,
                         std::uint64_t seed)
    : design_(design), truth_(truth), m_draws_(m_draws), seed_(seed) {
  if (m_draws < 2) {
    throw DimensionMismatch("m_draws must be at least 2");
  }
  if (design.p() != static_cast<int>(truth.theta.size())) {
    throw DimensionMismatch("theta length must equal the design column count");
  }
  paths_.reserve(static_cast<std::size_t>(m_draws));
  for (int r = 0; r < m_draws; ++r) {
    const std::uint64_t child = derive_seed(seed, "risk-replicate", static_cast<std::uint64_t>(r));
    const Dataset data = realize(design_, truth_, child);
    paths_.push_back(compute_path(data.design, data.response));
  }
}

double RiskContext::weighted_error(const LassoPath& path, double lambda) const {
  const Eigen::VectorXd diff = path.eval(lambda) - truth_.theta;
  return diff.dot(design_.gram() * diff);
}

RiskEstimate RiskContext::estimate_at(double lambda) const {
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const LassoPath& path : paths_) {
    const double value = weighted_error(path, lambda);
    sum += value;
    sum_sq += value * value;
  }
  const double m = static_cast<double>(m_draws_);
  const double mean = sum / m;
  const double var = std::max(0.0, (sum_sq - m * mean * mean) / (m - 1.0));
  return RiskEstimate{mean + truth_.sigma * truth_.sigma, std::sqrt(var / m)};
}

RiskEstimate RiskContext::paired_gap(double lambda_a, double lambda_b) const {
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const LassoPath& path : paths_) {
    const double diff = weighted_error(path, lambda_a) - weighted_error(path, lambda_b);
    sum += diff;
    sum_sq += diff * diff;
  }
  const double m = static_cast<double>(m_draws_);
  const double mean = sum / m;
  const double var = std::max(0.0, (sum_sq - m * mean * mean) / (m - 1.0));
  return RiskEstimate{mean, std::sqrt(var / m)};
}

double RiskContext::max_lambda_max() const {
  double top = 0.0;
  for (const LassoPath& path : paths_) {
    top = std::max(top, path.lambda_max());
  }
  return top;
}

RiskEstimate risk_at(const DesignMatrix& design, const GroundTruth& truth, double lambda,
                     int m_draws, std::uint64_t seed) {
  return RiskContext(design, truth, m_draws, seed).estimate_at(lambda);
}

RiskCurve risk_curve(const RiskContext& context, const std::vector<double>& lambda_grid) {
  if (lambda_grid.empty()) {
    throw DimensionMismatch("lambda grid must be non-empty");
  }
  if (!std::is_sorted(lambda_grid.begin(), lambda_grid.end())) {
    throw DimensionMismatch("lambda grid must be sorted ascending");
  }
  RiskCurve curve;
  curve.lambdas = lambda_grid;
  curve.m_draws = context.m_draws();
  curve.seed = context.seed();
  curve.estimates.reserve(lambda_grid.size());
  curve.std_errors.reserve(lambda_grid.size());
  double best = std::numeric_limits<double>::infinity();
  for (double lambda : lambda_grid) {
    const RiskEstimate est = context.estimate_at(lambda);
    curve.estimates.push_back(est.estimate);
    curve.std_errors.push_back(est.std_error);
    // Non-strict comparison while ascending: ties resolve to the largest lambda.
    if (est.estimate <= best) {
      best = est.estimate;
      curve.lambda_star = lambda;
    }
  }
  return curve;
}

RiskCurve risk_curve(const DesignMatrix& design, const GroundTruth& truth,
                     const std::vector<double>& lambda_grid, int m_draws, std::uint64_t seed) {
  return risk_curve(RiskContext(design, truth, m_draws, seed), lambda_grid);
}

RiskEstimate risk_gap(const RiskContext& context, double lambda_hat, double lambda_star) {
  if (lambda_hat < 0.0 || lambda_star < 0.0) {
    throw DimensionMismatch("lambdas must be nonnegative");
  }
  if (lambda_hat == lambda_star) {
    return RiskEstimate{0.0, 0.0};
  }
  return context.paired_gap(lambda_hat, lambda_star);
}

std::vector<double> default_lambda_grid(double lambda_top, int resolution,
                                        const std::vector<double>& extra_points) {
  std::vector<double> grid;
  grid.push_back(0.0);
  if (lambda_top > 0.0 && resolution > 0) {
    // Geometric ladder over three decades up to lambda_top.
    const double lo = lambda_top * 1e-3;
    const double ratio = std::pow(lambda_top / lo, 1.0 / std::max(1, resolution - 1));
    double value = lo;
    for (int k = 0; k < resolution; ++k) {
      grid.push_back(std::min(value, lambda_top));
      value *= ratio;
    }
    grid.push_back(lambda_top);
  }
  for (double v : extra_points) {
    if (v >= 0.0 && v <= lambda_top) {
      grid.push_back(v);
    }
  }
  std::sort(grid.begin(), grid.end());
  std::vector<double> out;
  for (double v : grid) {
    if (out.empty() || v - out.back() > 1e-14 * std::max(1.0, v)) {
      out.push_back(v);
    }
  }
  return out;
}

}  // namespace lassocv
