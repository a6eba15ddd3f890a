#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lassocv/design.hpp"
#include "lassocv/lasso_path.hpp"

namespace lassocv {

/// The n leave-one-out solution paths of a dataset. paths[i] was fit with
/// observation i removed. merged_knots is the strictly decreasing union of
/// every knot of every path (and of the full-sample path's lambda_max),
/// bracketed by lambda_top and 0, so that every path is affine inside each
/// consecutive pair.
struct LooPathSet {
  std::vector<LassoPath> paths;
  std::vector<double> merged_knots;  // strictly decreasing, merged_knots.front() == lambda_top
  double lambda_top = 0.0;           // 1% above the largest lambda_max seen
};

/// Fits all n leave-one-out paths. Throws RankDeficientFold if any deleted
/// row breaks full column rank.
LooPathSet loo_paths(const Dataset& data);

/// The leave-one-out cross-validation risk curve, assembled exactly: on each
/// breakpoint interval every held-out prediction is affine in lambda, so the
/// averaged squared residual is one quadratic q0 + q1 l + q2 l^2 per interval.
class CvCurve {
 public:
  struct Quad {
    double q0 = 0.0;
    double q1 = 0.0;
    double q2 = 0.0;
  };

  CvCurve(std::vector<double> breakpoints, std::vector<Quad> quads, double flat_value,
          double lambda_top);

  const std::vector<double>& breakpoints() const { return breakpoints_; }  // ascending
  const std::vector<Quad>& quad_coeffs() const { return quads_; }
  double lambda_hat() const { return lambda_hat_; }
  double min_value() const { return min_value_; }
  double lambda_top() const { return lambda_top_; }

  /// Exact curve value; constant (the mean squared response) beyond lambda_top.
  double eval(double lambda) const;

  /// Interior vertices of the per-interval quadratics, ascending. These are
  /// the only stationary points the curve can have.
  std::vector<double> interval_vertices() const;

 private:
  friend double argmin_cv(const CvCurve&);
  std::vector<double> breakpoints_;
  std::vector<Quad> quads_;  // quads_[k] on [breakpoints_[k], breakpoints_[k+1]]
  double flat_value_ = 0.0;
  double lambda_top_ = 0.0;
  double lambda_hat_ = 0.0;
  double min_value_ = 0.0;
};

CvCurve cv_curve(const Dataset& data);
CvCurve cv_curve(const Dataset& data, const LooPathSet& loo);

/// Largest lambda attaining the global minimum of the curve over
/// [0, lambda_top]; ties (within 1e-12 relative) break toward more
/// regularization.
double argmin_cv(const CvCurve& curve);

/// Leave-one-out least-squares fit via a Sherman-Morrison downdate of the
/// Gram inverse, without refitting. Throws SingularDowndate when the
/// leverage of row i reaches 1.
Eigen::VectorXd loo_ols_rank_one(const Dataset& data, int i);

/// Shared downdate machinery: factorizes X^T X once, then serves all n
/// leave-one-out least-squares fits in O(p^2) each.
class LooOlsDowndater {
 public:
  explicit LooOlsDowndater(const Dataset& data);
  const Eigen::VectorXd& full_fit() const { return full_fit_; }
  Eigen::VectorXd theta_without(int i) const;

 private:
  const Eigen::MatrixXd x_;
  Eigen::VectorXd response_;
  Eigen::MatrixXd gram_inverse_;  // (X^T X)^{-1}
  Eigen::VectorXd full_fit_;
};

/// Grid-based K-fold cross-validation risk estimates: contiguous folds of a
/// seeded shuffle (seed derived from data.seed, tag "kfold"). K = n
/// reproduces the leave-one-out values at the grid points.
std::vector<std::pair<double, double>> kfold_curve(const Dataset& data, int K,
                                                   const std::vector<double>& lambda_grid);

/// max over i of sup over [0, lambda_top] of || theta(l) - theta^(i)(l) ||_2,
/// computed exactly: the difference is affine between merged knots, so the
/// norm's sup on each interval is attained at an endpoint.
double loo_stability(const LassoPath& full_path, const LooPathSet& loo);
double loo_stability(const Dataset& data);

}  // namespace lassocv
