#include "lassocv/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "lassocv/errors.hpp"
#include "lassocv/rng.hpp"
#include "lassocv/stats.hpp"

namespace lassocv {

TailBoundReport quadratic_form_tail(const NoiseFamily& noise, int n, const Eigen::VectorXd& mu,
                                    const std::vector<double>& t_values, long trials,
                                    std::uint64_t seed) {
  if (trials < 10000) {
    throw DimensionMismatch("tail estimation needs at least 1e4 trials");
  }
  if (mu.size() != n) {
    throw DimensionMismatch("mu must have length n");
  }
  const double tau_sq = noise.tau * noise.tau;
  const double mu_sq = mu.squaredNorm();
  const double dn = static_cast<double>(n);

  TailBoundReport report;
  report.t_values = t_values;
  report.trials = trials;
  std::vector<double> thresholds;
  for (double t : t_values) {
    // Identity mixing matrix: trace n, trace of the square n, operator norm 1.
    const double gs = tau_sq * (dn + 2.0 * std::sqrt(dn * t) + 2.0 * t);
    const double gm = mu_sq * std::sqrt(1.0 + 4.0 * std::sqrt(t / dn) + 4.0 * t / dn);
    report.g_sigma.push_back(gs);
    report.g_mu.push_back(gm);
    report.analytic_bound.push_back(std::exp(-t));
    thresholds.push_back(gs + gm);

    const double delta = std::sqrt(t / dn);
    const double eps = 2.0 * delta * (tau_sq * (1.0 + 2.0 * delta) + mu_sq);
    report.simplified_epsilon.push_back(eps);
    report.simplified_bound.push_back(2.0 * std::exp(-dn * eps * eps));
  }

  std::vector<long> exceed(t_values.size(), 0);
  std::vector<long> simplified_exceed(t_values.size(), 0);
  double sum_z_sq = 0.0;
  Rng rng(seed);
  for (long trial = 0; trial < trials; ++trial) {
    double z_sq = 0.0;
    for (int i = 0; i < n; ++i) {
      double w = 0.0;
      switch (noise.kind) {
        case NoiseFamily::Kind::StandardGaussian:
          w = rng.gaussian();
          break;
        case NoiseFamily::Kind::Rademacher:
          w = rng.rademacher();
          break;
        case NoiseFamily::Kind::UniformUnitVariance:
          w = rng.uniform_unit_variance();
          break;
      }
      const double z = mu[i] + w;
      z_sq += z * z;
    }
    sum_z_sq += z_sq;
    for (std::size_t k = 0; k < t_values.size(); ++k) {
      if (z_sq > thresholds[k]) {
        ++exceed[k];
      }
      if (std::abs(z_sq / dn - mu_sq - tau_sq) > report.simplified_epsilon[k]) {
        ++simplified_exceed[k];
      }
    }
  }
  report.mean_quadratic_form = sum_z_sq / dn / static_cast<double>(trials);
  for (std::size_t k = 0; k < t_values.size(); ++k) {
    report.empirical_exceedance.push_back(static_cast<double>(exceed[k]) /
                                          static_cast<double>(trials));
    report.simplified_empirical.push_back(static_cast<double>(simplified_exceed[k]) /
                                          static_cast<double>(trials));
  }
  return report;
}

DecompositionRecord decomposition_terms(const DesignMatrix& design, const GroundTruth& truth,
                                        double lambda, int m_draws, std::uint64_t seed) {
  if (m_draws < 2) {
    throw DimensionMismatch("m_draws must be at least 2");
  }
  const int n = design.n();
  const double dn = static_cast<double>(n);
  const Eigen::MatrixXd& gram = design.gram();

  // Data-dependent side: one realization and its leave-one-out fits.
  const Dataset data = realize(design, truth, derive_seed(seed, "decomp-data"));
  const LooPathSet loo = loo_paths(data);
  double sum_pred_sq = 0.0;
  double sum_y_pred = 0.0;
  double sum_y_sq = 0.0;
  double cv_value = 0.0;
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd theta_i = loo.paths[static_cast<std::size_t>(i)].eval(lambda);
    const double pred = design.matrix().row(i).dot(theta_i);
    const double y = data.response[i];
    sum_pred_sq += pred * pred;
    sum_y_pred += y * pred;
    sum_y_sq += y * y;
    cv_value += (y - pred) * (y - pred);
  }
  sum_pred_sq /= dn;
  sum_y_pred /= dn;
  sum_y_sq /= dn;
  cv_value /= dn;

  // Expectation side: common random numbers across all three terms.
  std::vector<double> quad_terms;   // theta_hat^T C theta_hat
  std::vector<double> cross_terms;  // theta_hat^T C theta
  std::vector<double> loss_terms;   // ||theta_hat - theta||_C^2
  quad_terms.reserve(static_cast<std::size_t>(m_draws));
  for (int r = 0; r < m_draws; ++r) {
    const Dataset mc =
        realize(design, truth, derive_seed(seed, "decomp-mc", static_cast<std::uint64_t>(r)));
    const Eigen::VectorXd theta_hat = compute_path(mc.design, mc.response).eval(lambda);
    quad_terms.push_back(theta_hat.dot(gram * theta_hat));
    cross_terms.push_back(theta_hat.dot(gram * truth.theta));
    const Eigen::VectorXd diff = theta_hat - truth.theta;
    loss_terms.push_back(diff.dot(gram * diff));
  }
  const auto quad = mean_std_error(quad_terms);
  const auto cross = mean_std_error(cross_terms);
  const auto loss = mean_std_error(loss_terms);
  const double sigma_sq = truth.sigma * truth.sigma;
  const double signal = truth.theta.dot(gram * truth.theta);

  DecompositionRecord record;
  record.lambda = lambda;
  record.term_a = std::abs(quad.mean - sum_pred_sq);
  record.term_b = 2.0 * std::abs(cross.mean - sum_y_pred);
  record.term_c = std::abs(signal + sigma_sq - sum_y_sq);
  record.lhs = std::abs(loss.mean + sigma_sq - cv_value);
  record.se_a = quad.std_error;
  record.se_b = 2.0 * cross.std_error;
  record.se_c = 0.0;
  record.se_lhs = loss.std_error;
  record.combined_std_error = record.se_a + record.se_b + record.se_c + record.se_lhs;
  return record;
}

MeanConvergenceProbe mean_convergence_probe(const DesignMatrix& design, const GroundTruth& truth,
                                            const std::vector<double>& lambda_grid, int m_draws,
                                            std::uint64_t seed) {
  if (m_draws < 2) {
    throw DimensionMismatch("m_draws must be at least 2");
  }
  if (lambda_grid.empty()) {
    throw DimensionMismatch("lambda grid must be non-empty");
  }
  const int p = design.p();
  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(p, static_cast<Eigen::Index>(lambda_grid.size()));
  for (int r = 0; r < m_draws; ++r) {
    const Dataset mc =
        realize(design, truth, derive_seed(seed, "mean-mc", static_cast<std::uint64_t>(r)));
    const LassoPath path = compute_path(mc.design, mc.response);
    for (std::size_t g = 0; g < lambda_grid.size(); ++g) {
      mean.col(static_cast<Eigen::Index>(g)) += path.eval(lambda_grid[g]);
    }
  }
  mean /= static_cast<double>(m_draws);

  const Dataset held_out = realize(design, truth, derive_seed(seed, "mean-probe"));
  const LassoPath path = compute_path(held_out.design, held_out.response);

  MeanConvergenceProbe probe;
  probe.lambdas = lambda_grid;
  for (std::size_t g = 0; g < lambda_grid.size(); ++g) {
    const Eigen::VectorXd diff =
        path.eval(lambda_grid[g]) - mean.col(static_cast<Eigen::Index>(g));
    const double dev = diff.lpNorm<Eigen::Infinity>();
    probe.max_abs_deviation.push_back(dev);
    probe.weighted_sq_deviation.push_back(diff.dot(design.gram() * diff));
    probe.sup_deviation = std::max(probe.sup_deviation, dev);
  }
  return probe;
}

BiiiDecay biii_decay(const DesignSpec& spec, const GroundTruth& truth,
                     const std::vector<int>& n_values, int reps, std::uint64_t seed) {
  if (reps < 1) {
    throw DimensionMismatch("reps must be at least 1");
  }
  BiiiDecay out;
  out.n_values = n_values;
  for (int n : n_values) {
    const DesignMatrix design = generate_design(spec.with_n(n));
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(reps));
    for (int rep = 0; rep < reps; ++rep) {
      const Dataset data =
          realize(design, truth, derive_seed(seed, "biii", static_cast<std::uint64_t>(n),
                                             static_cast<std::uint64_t>(rep)));
      const LooOlsDowndater downdater(data);
      double weighted = 0.0;
      for (int i = 0; i < n; ++i) {
        weighted += data.noise_draw[i] * downdater.theta_without(i).lpNorm<1>();
      }
      const double sigma_sq = truth.sigma * truth.sigma;
      values.push_back(sigma_sq * design.c_x_bound() / static_cast<double>(n) *
                       std::abs(weighted));
    }
    out.medians.push_back(median(values));
    out.raw.push_back(std::move(values));
  }
  return out;
}

SupGapResult sup_cv_risk_gap(const Dataset& data, const CvCurve& curve,
                             const RiskContext& context, const std::vector<double>& risk_grid) {
  std::vector<double> points = curve.breakpoints();
  const std::vector<double> vertices = curve.interval_vertices();
  points.insert(points.end(), vertices.begin(), vertices.end());
  for (double v : risk_grid) {
    if (v >= 0.0 && v <= curve.lambda_top()) {
      points.push_back(v);
    }
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  SupGapResult result;
  for (double lambda : points) {
    const RiskEstimate risk = context.estimate_at(lambda);
    const double gap = std::abs(curve.eval(lambda) - risk.estimate);
    if (gap > result.value) {
      result.value = gap;
      result.lambda_at_sup = lambda;
      result.mc_std_error = risk.std_error;
    }
  }
  return result;
}

SupGapResult sup_cv_risk_gap(const DesignMatrix& design, const GroundTruth& truth, int m_draws,
                             std::uint64_t seed) {
  const Dataset data = realize(design, truth, derive_seed(seed, "supgap-data"));
  const CvCurve curve = cv_curve(data);
  const RiskContext context(design, truth, m_draws, derive_seed(seed, "supgap-risk"));
  const std::vector<double> grid = default_lambda_grid(curve.lambda_top(), 100);
  return sup_cv_risk_gap(data, curve, context, grid);
}

}  // namespace lassocv
