#include "lassocv/cv.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lassocv/errors.hpp"
#include "lassocv/rng.hpp"

namespace lassocv {

namespace {

// Collapses values closer than 1e-14 (relative) so no interval degenerates.
std::vector<double> dedupe_descending(std::vector<double> values) {
  std::sort(values.begin(), values.end(), std::greater<>());
  std::vector<double> out;
  for (double v : values) {
    if (out.empty() || out.back() - v > 1e-14 * std::max(1.0, std::abs(out.back()))) {
      out.push_back(v);
    }
  }
  return out;
}

Dataset drop_observation(const Dataset& data, int i) {
  const int n = data.n();
  Eigen::VectorXd response(n - 1);
  response.head(i) = data.response.head(i);
  response.tail(n - 1 - i) = data.response.tail(n - 1 - i);
  Eigen::VectorXd noise(n - 1);
  if (data.noise_draw.size() == n) {
    noise.head(i) = data.noise_draw.head(i);
    noise.tail(n - 1 - i) = data.noise_draw.tail(n - 1 - i);
  } else {
    noise = Eigen::VectorXd::Zero(n - 1);
  }
  return Dataset{data.design.without_row(i), std::move(response), std::move(noise),
                 data.truth, data.seed};
}

}  // namespace

LooPathSet loo_paths(const Dataset& data) {
  const int n = data.n();
  if (n < 2) {
    throw DimensionMismatch("leave-one-out needs at least two observations");
  }

  LooPathSet set;
  set.paths.reserve(n);
  std::vector<double> knots;
  const LassoPath full = compute_path(data.design, data.response);
  double top = full.lambda_max();
  for (int i = 0; i < n; ++i) {
    Dataset reduced = drop_observation(data, i);
    LassoPath path = compute_path(reduced.design, reduced.response);
    top = std::max(top, path.lambda_max());
    knots.insert(knots.end(), path.knots().begin(), path.knots().end());
    set.paths.push_back(std::move(path));
  }
  set.lambda_top = top * 1.01;
  knots.push_back(0.0);
  knots.push_back(set.lambda_top);
  set.merged_knots = dedupe_descending(std::move(knots));
  return set;
}

CvCurve::CvCurve(std::vector<double> breakpoints, std::vector<Quad> quads, double flat_value,
                 double lambda_top)
    : breakpoints_(std::move(breakpoints)),
      quads_(std::move(quads)),
      flat_value_(flat_value),
      lambda_top_(lambda_top) {
  lambda_hat_ = argmin_cv(*this);
  min_value_ = eval(lambda_hat_);
}

double CvCurve::eval(double lambda) const {
  if (lambda < 0.0) {
    throw DimensionMismatch("lambda must be nonnegative");
  }
  if (quads_.empty() || lambda >= lambda_top_) {
    return flat_value_;
  }
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), lambda);
  int k = static_cast<int>(it - breakpoints_.begin()) - 1;
  k = std::clamp(k, 0, static_cast<int>(quads_.size()) - 1);
  const Quad& q = quads_[static_cast<std::size_t>(k)];
  return q.q0 + lambda * (q.q1 + lambda * q.q2);
}

std::vector<double> CvCurve::interval_vertices() const {
  std::vector<double> out;
  for (std::size_t k = 0; k < quads_.size(); ++k) {
    const Quad& q = quads_[k];
    if (q.q2 > 0.0) {
      const double vertex = -q.q1 / (2.0 * q.q2);
      if (vertex > breakpoints_[k] && vertex < breakpoints_[k + 1]) {
        out.push_back(vertex);
      }
    }
  }
  return out;
}

double argmin_cv(const CvCurve& curve) {
  if (curve.quads_.empty()) {
    return curve.lambda_top_;
  }
  struct Candidate {
    double value;
    double lambda;
  };
  std::vector<Candidate> mins;
  mins.reserve(curve.quads_.size());
  for (std::size_t k = 0; k < curve.quads_.size(); ++k) {
    const auto& q = curve.quads_[k];
    const double lo = curve.breakpoints_[k];
    const double hi = curve.breakpoints_[k + 1];
    auto value_at = [&](double l) { return q.q0 + l * (q.q1 + l * q.q2); };
    Candidate best{value_at(hi), hi};  // flat pieces resolve toward hi
    if (value_at(lo) < best.value) {
      best = {value_at(lo), lo};
    }
    if (q.q2 > 0.0) {
      const double vertex = -q.q1 / (2.0 * q.q2);
      if (vertex > lo && vertex < hi && value_at(vertex) < best.value) {
        best = {value_at(vertex), vertex};
      }
    }
    mins.push_back(best);
  }
  double global = mins.front().value;
  for (const auto& c : mins) {
    global = std::min(global, c.value);
  }
  const double tie_eps = 1e-12 * std::max(1.0, std::abs(global));
  double lambda_hat = 0.0;
  for (const auto& c : mins) {
    if (c.value <= global + tie_eps) {
      lambda_hat = std::max(lambda_hat, c.lambda);
    }
  }
  return lambda_hat;
}

CvCurve cv_curve(const Dataset& data) { return cv_curve(data, loo_paths(data)); }

CvCurve cv_curve(const Dataset& data, const LooPathSet& loo) {
  const int n = data.n();
  const double flat_value = data.response.squaredNorm() / static_cast<double>(n);
  if (loo.lambda_top <= 0.0) {
    // Every path is identically zero; the curve is one flat point.
    return CvCurve({0.0}, {}, flat_value, 0.0);
  }

  // Ascending breakpoints from the descending merged knots.
  std::vector<double> bps(loo.merged_knots.rbegin(), loo.merged_knots.rend());
  const std::size_t intervals = bps.size() - 1;

  std::vector<CvCurve::Quad> quads(intervals);
  for (std::size_t k = 0; k < intervals; ++k) {
    const double mid = 0.5 * (bps[k] + bps[k + 1]);
    double s_aa = 0.0;
    double s_ab = 0.0;
    double s_bb = 0.0;
    for (int i = 0; i < n; ++i) {
      const LassoPath& path = loo.paths[static_cast<std::size_t>(i)];
      double pred_intercept = 0.0;
      double pred_slope = 0.0;
      if (mid < path.lambda_max() && !path.segments().empty()) {
        const PathSegment& seg =
            path.segments()[static_cast<std::size_t>(path.segment_index(mid))];
        pred_intercept = data.design.matrix().row(i).dot(seg.intercept);
        pred_slope = data.design.matrix().row(i).dot(seg.slope);
      }
      const double alpha = data.response[i] - pred_intercept;
      const double beta = -pred_slope;
      s_aa += alpha * alpha;
      s_ab += alpha * beta;
      s_bb += beta * beta;
    }
    quads[k] = CvCurve::Quad{s_aa / n, 2.0 * s_ab / n, s_bb / n};
  }
  return CvCurve(std::move(bps), std::move(quads), flat_value, loo.lambda_top);
}

LooOlsDowndater::LooOlsDowndater(const Dataset& data)
    : x_(data.design.matrix()), response_(data.response) {
  const Eigen::MatrixXd gram_full = x_.transpose() * x_;
  Eigen::LLT<Eigen::MatrixXd> llt(gram_full);
  if (llt.info() != Eigen::Success) {
    throw RankDeficient("X^T X is not positive definite");
  }
  gram_inverse_ = llt.solve(Eigen::MatrixXd::Identity(x_.cols(), x_.cols()));
  full_fit_ = llt.solve(x_.transpose() * response_);
}

Eigen::VectorXd LooOlsDowndater::theta_without(int i) const {
  if (i < 0 || i >= x_.rows()) {
    throw DimensionMismatch("row index out of range");
  }
  const Eigen::VectorXd xi = x_.row(i).transpose();
  const Eigen::VectorXd gi = gram_inverse_ * xi;
  const double leverage = xi.dot(gi);
  const double denom = 1.0 - leverage;
  if (denom <= 1e-12) {
    throw SingularDowndate("leave-one-out Gram downdate is singular");
  }
  const double residual = response_[i] - xi.dot(full_fit_);
  return full_fit_ - gi * (residual / denom);
}

Eigen::VectorXd loo_ols_rank_one(const Dataset& data, int i) {
  return LooOlsDowndater(data).theta_without(i);
}

std::vector<std::pair<double, double>> kfold_curve(const Dataset& data, int K,
                                                   const std::vector<double>& lambda_grid) {
  const int n = data.n();
  if (K < 2 || K > n) {
    throw DimensionMismatch("K must satisfy 2 <= K <= n");
  }

  // Seeded Fisher-Yates shuffle, then contiguous folds.
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed(data.seed, "kfold"));
  for (int i = n - 1; i > 0; --i) {
    const auto j = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(i + 1));
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  }

  std::vector<double> sums(lambda_grid.size(), 0.0);
  int start = 0;
  for (int fold = 0; fold < K; ++fold) {
    const int size = n / K + (fold < n % K ? 1 : 0);
    std::vector<bool> held(static_cast<std::size_t>(n), false);
    for (int t = start; t < start + size; ++t) {
      held[static_cast<std::size_t>(order[static_cast<std::size_t>(t)])] = true;
    }
    start += size;

    Eigen::MatrixXd train_x(n - size, data.p());
    Eigen::VectorXd train_y(n - size);
    int r = 0;
    for (int i = 0; i < n; ++i) {
      if (!held[static_cast<std::size_t>(i)]) {
        train_x.row(r) = data.design.matrix().row(i);
        train_y[r] = data.response[i];
        ++r;
      }
    }
    DesignMatrix train_design = [&] {
      try {
        return DesignMatrix::from_rows(std::move(train_x), data.design.c_x_bound());
      } catch (const RankDeficient&) {
        throw RankDeficientFold("fold training rows lost full column rank");
      }
    }();

    const LassoPath path = compute_path(train_design, train_y);
    for (std::size_t g = 0; g < lambda_grid.size(); ++g) {
      const Eigen::VectorXd theta = path.eval(lambda_grid[g]);
      for (int i = 0; i < n; ++i) {
        if (held[static_cast<std::size_t>(i)]) {
          const double err = data.response[i] - data.design.matrix().row(i).dot(theta);
          sums[g] += err * err;
        }
      }
    }
  }

  std::vector<std::pair<double, double>> out;
  out.reserve(lambda_grid.size());
  for (std::size_t g = 0; g < lambda_grid.size(); ++g) {
    out.emplace_back(lambda_grid[g], sums[g] / static_cast<double>(n));
  }
  return out;
}

double loo_stability(const LassoPath& full_path, const LooPathSet& loo) {
  double worst = 0.0;
  for (const LassoPath& path : loo.paths) {
    std::vector<double> candidates = full_path.knots();
    candidates.insert(candidates.end(), path.knots().begin(), path.knots().end());
    candidates.push_back(loo.lambda_top);
    for (double lambda : candidates) {
      if (lambda < 0.0 || lambda > loo.lambda_top) continue;
      const double diff = (full_path.eval(lambda) - path.eval(lambda)).norm();
      worst = std::max(worst, diff);
    }
  }
  return worst;
}

double loo_stability(const Dataset& data) {
  const LassoPath full = compute_path(data.design, data.response);
  return loo_stability(full, loo_paths(data));
}

}  // namespace lassocv
