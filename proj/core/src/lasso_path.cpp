#include "lassocv/lasso_path.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lassocv/errors.hpp"

namespace lassocv {

namespace {

constexpr double kEventTol = 1e-12;  // absolute tolerance separating homotopy events

struct Event {
  enum class Kind { None, Enter, Leave };
  Kind kind = Kind::None;
  int index = -1;
  int sign = 0;       // for Enter: sign the coefficient takes
  double lambda = 0.0;
};

}  // namespace

LassoPath::LassoPath(std::vector<double> knots, std::vector<PathSegment> segments, int p)
    : knots_(std::move(knots)), segments_(std::move(segments)), p_(p) {}

int LassoPath::segment_index(double lambda) const {
  if (segments_.empty()) {
    return -1;
  }
  if (lambda >= knots_.front()) {
    return 0;
  }
  // knots_ is strictly decreasing; find k with knots_[k+1] <= lambda <= knots_[k].
  const auto it = std::lower_bound(knots_.begin(), knots_.end(), lambda,
                                   [](double knot, double value) { return knot > value; });
  int k = static_cast<int>(it - knots_.begin()) - 1;
  k = std::clamp(k, 0, static_cast<int>(segments_.size()) - 1);
  return k;
}

Eigen::VectorXd LassoPath::eval(double lambda) const {
  if (segments_.empty() || lambda >= lambda_max()) {
    return Eigen::VectorXd::Zero(p_);
  }
  const PathSegment& seg = segments_[static_cast<std::size_t>(segment_index(lambda))];
  return seg.intercept + lambda * seg.slope;
}

Eigen::VectorXd eval_path(const LassoPath& path, double lambda) {
  if (lambda < 0.0) {
    throw DimensionMismatch("lambda must be nonnegative");
  }
  return path.eval(lambda);
}

namespace {

// Solves for the segment's affine coefficients given active set and signs:
// theta_E(lambda) = (X_E^T X_E)^{-1} (X_E^T Y - n lambda s_E).
void segment_coefficients(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                          const std::vector<int>& active, const std::vector<int>& signs,
                          Eigen::VectorXd& intercept, Eigen::VectorXd& slope) {
  const auto n = static_cast<double>(x.rows());
  const auto p = x.cols();
  const int k = static_cast<int>(active.size());
  Eigen::MatrixXd xe(x.rows(), k);
  Eigen::VectorXd se(k);
  for (int j = 0; j < k; ++j) {
    xe.col(j) = x.col(active[static_cast<std::size_t>(j)]);
    se[j] = static_cast<double>(signs[static_cast<std::size_t>(j)]);
  }
  Eigen::LLT<Eigen::MatrixXd> llt(xe.transpose() * xe);
  if (llt.info() != Eigen::Success) {
    throw NoConvergence("active-set Gram factorization failed");
  }
  const Eigen::VectorXd a = llt.solve(xe.transpose() * y);
  const Eigen::VectorXd b = -n * llt.solve(se);
  intercept = Eigen::VectorXd::Zero(p);
  slope = Eigen::VectorXd::Zero(p);
  for (int j = 0; j < k; ++j) {
    intercept[active[static_cast<std::size_t>(j)]] = a[j];
    slope[active[static_cast<std::size_t>(j)]] = b[j];
  }
}

}  // namespace

LassoPath compute_path(const DesignMatrix& design, const Eigen::VectorXd& response) {
  const Eigen::MatrixXd& x = design.matrix();
  const int n = design.n();
  const int p = design.p();
  if (response.size() != n) {
    throw DimensionMismatch("response length must equal the design row count");
  }

  const Eigen::VectorXd correlations = x.transpose() * response / static_cast<double>(n);
  double lambda_max = 0.0;
  int first = -1;
  for (int j = 0; j < p; ++j) {
    if (std::abs(correlations[j]) > lambda_max) {
      lambda_max = std::abs(correlations[j]);
      first = j;
    }
  }
  if (lambda_max <= kEventTol) {
    // Response orthogonal to every column (up to event resolution): the
    // path is identically zero.
    return LassoPath({0.0}, {}, p);
  }
  for (int j = 0; j < p; ++j) {
    if (j != first && std::abs(std::abs(correlations[j]) - lambda_max) <= kEventTol) {
      throw DegenerateTie("two variables enter at lambda_max");
    }
  }

  std::vector<int> active = {first};
  std::vector<int> signs = {correlations[first] > 0.0 ? 1 : -1};
  std::vector<bool> is_active(static_cast<std::size_t>(p), false);
  is_active[static_cast<std::size_t>(first)] = true;

  std::vector<double> knots = {lambda_max};
  std::vector<PathSegment> segments;
  double lam = lambda_max;

  const int max_events = 200 * p + 1000;
  for (int iter = 0; iter <= max_events; ++iter) {
    if (iter == max_events) {
      throw NoConvergence("homotopy event count exceeded the cap");
    }
    if (active.empty()) {
      // Unreachable below lambda_max for a unique solution; only a tie can
      // empty the active set.
      throw DegenerateTie("active set emptied below lambda_max");
    }

    Eigen::VectorXd intercept;
    Eigen::VectorXd slope;
    segment_coefficients(x, response, active, signs, intercept, slope);

    Event best;
    Event second;
    auto consider = [&](Event candidate) {
      if (candidate.lambda > best.lambda) {
        second = best;
        best = candidate;
      } else if (candidate.lambda > second.lambda) {
        second = candidate;
      }
    };

    // Sign-crossing (leave) events: intercept_j + lambda * slope_j = 0.
    // Candidates inside [0, kEventTol] are below event resolution: they
    // coincide with the path's terminus and are treated as no event.
    for (std::size_t k = 0; k < active.size(); ++k) {
      const int j = active[k];
      if (slope[j] == 0.0) continue;
      const double cross = -intercept[j] / slope[j];
      if (cross > kEventTol && cross < lam - kEventTol) {
        consider({Event::Kind::Leave, j, 0, cross});
      }
    }

    // Entry events: the inactive correlation c_j(lambda) = u_j + lambda v_j
    // touches +lambda or -lambda from inside.
    const Eigen::VectorXd residual_intercept = response - x * intercept;  // at lambda = 0 part
    const Eigen::VectorXd u_full = x.transpose() * residual_intercept / static_cast<double>(n);
    const Eigen::VectorXd v_full = -(x.transpose() * (x * slope)) / static_cast<double>(n);
    for (int j = 0; j < p; ++j) {
      if (is_active[static_cast<std::size_t>(j)]) continue;
      const double u = u_full[j];
      const double v = v_full[j];
      const double denom_pos = 1.0 - v;
      if (denom_pos != 0.0) {
        const double hit = u / denom_pos;
        if (hit > kEventTol && hit < lam - kEventTol) {
          consider({Event::Kind::Enter, j, 1, hit});
        }
      }
      const double denom_neg = 1.0 + v;
      if (denom_neg != 0.0) {
        const double hit = -u / denom_neg;
        if (hit > kEventTol && hit < lam - kEventTol) {
          consider({Event::Kind::Enter, j, -1, hit});
        }
      }
    }

    if (best.kind != Event::Kind::None && second.kind != Event::Kind::None &&
        best.lambda - second.lambda <= kEventTol &&
        !(best.index == second.index && best.kind == second.kind)) {
      throw DegenerateTie("two homotopy events coincide");
    }

    const double next = (best.kind == Event::Kind::None) ? 0.0 : best.lambda;
    segments.push_back(PathSegment{next, lam, active, signs, intercept, slope});
    knots.push_back(next);
    if (best.kind == Event::Kind::None) {
      break;
    }

    if (best.kind == Event::Kind::Leave) {
      const auto pos = std::find(active.begin(), active.end(), best.index) - active.begin();
      active.erase(active.begin() + pos);
      signs.erase(signs.begin() + pos);
      is_active[static_cast<std::size_t>(best.index)] = false;
    } else {
      const auto pos = std::upper_bound(active.begin(), active.end(), best.index) - active.begin();
      active.insert(active.begin() + pos, best.index);
      signs.insert(signs.begin() + pos, best.sign);
      is_active[static_cast<std::size_t>(best.index)] = true;
    }
    lam = next;
  }

  return LassoPath(std::move(knots), std::move(segments), p);
}

KktReport kkt_residual(const DesignMatrix& design, const Eigen::VectorXd& response,
                       double lambda, const Eigen::VectorXd& theta) {
  const Eigen::MatrixXd& x = design.matrix();
  if (response.size() != x.rows() || theta.size() != x.cols()) {
    throw DimensionMismatch("kkt_residual: shapes disagree");
  }
  const Eigen::VectorXd g =
      x.transpose() * (response - x * theta) / static_cast<double>(x.rows());
  Eigen::VectorXd per(theta.size());
  for (Eigen::Index j = 0; j < theta.size(); ++j) {
    if (theta[j] != 0.0) {
      per[j] = std::abs(g[j] - lambda * (theta[j] > 0.0 ? 1.0 : -1.0));
    } else {
      per[j] = std::max(0.0, std::abs(g[j]) - lambda);
    }
  }
  KktReport report;
  report.per_coordinate = per;
  report.max_violation = per.size() > 0 ? per.maxCoeff() : 0.0;
  return report;
}

LipschitzDiagnostic lipschitz_diagnostic(const LassoPath& path, const DesignMatrix& design) {
  LipschitzDiagnostic diag;
  const Eigen::MatrixXd& x = design.matrix();
  const double n = static_cast<double>(design.n());
  for (const PathSegment& seg : path.segments()) {
    const double slope_norm = seg.slope.norm();
    double op_bound = 0.0;
    if (!seg.active_set.empty()) {
      const int k = static_cast<int>(seg.active_set.size());
      Eigen::MatrixXd xe(x.rows(), k);
      for (int j = 0; j < k; ++j) {
        xe.col(j) = x.col(seg.active_set[static_cast<std::size_t>(j)]);
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(xe.transpose() * xe /
                                                         static_cast<double>(n));
      // ||n (X_E^T X_E)^{-1}||_2 = 1 / eigen_min((1/n) X_E^T X_E)
      op_bound = 1.0 / eig.eigenvalues().minCoeff();
    }
    diag.segment_slope_norms.push_back(slope_norm);
    diag.segment_bounds.push_back(op_bound *
                                  std::sqrt(static_cast<double>(seg.active_set.size())));
    diag.realized_max_slope = std::max(diag.realized_max_slope, slope_norm);
    diag.lipschitz_bound = std::max(diag.lipschitz_bound, op_bound);
  }
  return diag;
}

}  // namespace lassocv
