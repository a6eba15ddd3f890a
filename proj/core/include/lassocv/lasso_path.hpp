#pragma once

#include <vector>

#include <Eigen/Dense>

#include "lassocv/design.hpp"

namespace lassocv {

/// One linearity interval of the solution path. On [lambda_lo, lambda_hi]
/// the solution is theta(lambda) = intercept + lambda * slope, with entries
/// outside the active set identically zero. Restricted to the active set,
/// slope = -n (X_E^T X_E)^{-1} s_E: coefficients shrink as lambda grows.
struct PathSegment {
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
  std::vector<int> active_set;  // ascending column indices, 0-based
  std::vector<int> signs;       // +1 / -1, aligned with active_set
  Eigen::VectorXd intercept;    // full length p
  Eigen::VectorXd slope;        // full length p
};

/// The exact piecewise-linear map lambda -> theta(lambda) for the penalized
/// least-squares problem (1/2n)||Y - X theta||_2^2 + lambda ||theta||_1.
/// Knots are strictly decreasing from lambda_max down to 0; segment k covers
/// [knots[k+1], knots[k]]. theta(lambda) = 0 for lambda >= lambda_max and
/// theta(0) is the least-squares solution.
class LassoPath {
 public:
  LassoPath(std::vector<double> knots, std::vector<PathSegment> segments, int p);

  const std::vector<double>& knots() const { return knots_; }
  const std::vector<PathSegment>& segments() const { return segments_; }
  double lambda_max() const { return knots_.front(); }
  int p() const { return p_; }

  Eigen::VectorXd eval(double lambda) const;

  /// Index of the segment containing lambda, clamped into range; returns -1
  /// for an empty path. Used by callers sweeping merged knots.
  int segment_index(double lambda) const;

 private:
  std::vector<double> knots_;          // strictly decreasing, ends at 0
  std::vector<PathSegment> segments_;  // segments_[k] covers [knots_[k+1], knots_[k]]
  int p_ = 0;
};

/// Homotopy solver. Handles variable-entry and sign-crossing events; throws
/// DegenerateTie when two events coincide within 1e-12 in lambda, and
/// NoConvergence if the event count blows past any plausible path length.
LassoPath compute_path(const DesignMatrix& design, const Eigen::VectorXd& response);

Eigen::VectorXd eval_path(const LassoPath& path, double lambda);

struct KktReport {
  double max_violation = 0.0;
  Eigen::VectorXd per_coordinate;
};

/// Subgradient residual of theta for the objective at this lambda. With
/// g = (1/n) X^T (Y - X theta): active coordinates score |g_j - lambda sgn|,
/// inactive ones max(0, |g_j| - lambda).
KktReport kkt_residual(const DesignMatrix& design, const Eigen::VectorXd& response,
                       double lambda, const Eigen::VectorXd& theta);

/// Realized slope norms against the active-set Gram-inverse bound. For a
/// segment with active set E, ||slope||_2 <= ||n (X_E^T X_E)^{-1}||_2 sqrt(|E|)
/// since the sign vector has norm sqrt(|E|).
struct LipschitzDiagnostic {
  double realized_max_slope = 0.0;          // max over segments of ||slope||_2
  double lipschitz_bound = 0.0;             // max over realized E of ||n (X_E^T X_E)^{-1}||_2
  std::vector<double> segment_slope_norms;  // per segment
  std::vector<double> segment_bounds;       // per segment: ||n(X_E^T X_E)^{-1}||_2 sqrt(|E|)
};

LipschitzDiagnostic lipschitz_diagnostic(const LassoPath& path, const DesignMatrix& design);

}  // namespace lassocv
