#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "lassocv/cv.hpp"
#include "lassocv/design.hpp"
#include "lassocv/risk.hpp"

namespace lassocv {

// Empirical probes for the supporting results behind the risk-consistency
// experiment: leave-one-out stability, convergence of the estimator to its
// Monte-Carlo mean, the three-term bound on |risk - CV risk|, sub-Gaussian
// quadratic-form tails, and the decay of the noise-weighted LOO-OLS l1 sums.

struct TailBoundReport {
  std::vector<double> t_values;
  std::vector<double> analytic_bound;        // e^{-t}
  std::vector<double> empirical_exceedance;  // P(||Z||^2 > g_sigma + g_mu), MC frequency
  std::vector<double> g_sigma;
  std::vector<double> g_mu;
  long trials = 0;
  double mean_quadratic_form = 0.0;  // average of ||Z||^2 / n over the trials
  // Readout of the simplified two-sided bound 2 e^{-n eps^2} with
  // eps = 2 delta (tau^2 (1 + 2 delta) + ||mu||^2), delta = sqrt(t/n).
  // Reported for inspection, never asserted: its constants do not hold in
  // general (see README).
  std::vector<double> simplified_epsilon;
  std::vector<double> simplified_bound;
  std::vector<double> simplified_empirical;
};

/// Tail frequencies of ||Z||_2^2 for Z = mu + W against the sub-Gaussian
/// quadratic-form bound with identity mixing matrix (trace n, operator norm 1).
TailBoundReport quadratic_form_tail(const NoiseFamily& noise, int n, const Eigen::VectorXd& mu,
                                    const std::vector<double>& t_values, long trials,
                                    std::uint64_t seed);

struct DecompositionRecord {
  double lambda = 0.0;
  double term_a = 0.0;  // | E theta^T C theta - (1/n) sum (X_i^T theta^(i))^2 |
  double term_b = 0.0;  // 2 | E theta^T C theta* - (1/n) sum Y_i X_i^T theta^(i) |
  double term_c = 0.0;  // | theta*^T C theta* + sigma^2 - (1/n) sum Y_i^2 |
  double lhs = 0.0;     // | risk(lambda) - cv_risk(lambda) |
  double se_a = 0.0;
  double se_b = 0.0;
  double se_c = 0.0;  // identically zero: term c has no Monte-Carlo part
  double se_lhs = 0.0;
  double combined_std_error = 0.0;  // se_a + se_b + se_c + se_lhs
};

/// Estimates the three-term decomposition of |risk - cv_risk| at one lambda.
/// Expectations use m_draws fresh-noise replicates shared across all terms
/// (common random numbers), so lhs <= a + b + c holds exactly for the
/// estimates; one additional realization supplies the data-dependent sums.
DecompositionRecord decomposition_terms(const DesignMatrix& design, const GroundTruth& truth,
                                        double lambda, int m_draws, std::uint64_t seed);

struct MeanConvergenceProbe {
  std::vector<double> lambdas;
  /// max_j |theta_j(lambda) - mean_j(lambda)| for a held-out draw, per lambda.
  std::vector<double> max_abs_deviation;
  /// || theta(lambda) - mean(lambda) ||_{C_n}^2 per lambda.
  std::vector<double> weighted_sq_deviation;
  double sup_deviation = 0.0;  // max over lambdas of max_abs_deviation
};

/// Monte-Carlo surrogate for convergence of the estimator to its expectation:
/// mean_j(lambda) averages m_draws replicate paths; the deviation is measured
/// on one extra held-out draw.
MeanConvergenceProbe mean_convergence_probe(const DesignMatrix& design, const GroundTruth& truth,
                                            const std::vector<double>& lambda_grid, int m_draws,
                                            std::uint64_t seed);

struct BiiiDecay {
  std::vector<int> n_values;
  std::vector<double> medians;           // per n, over reps
  std::vector<std::vector<double>> raw;  // per n, the rep values
};

/// Decay of (sigma^2 C_X / n) | sum_i W_i || theta^(i)(0) ||_1 | with n,
/// using the rank-one LOO-OLS downdates. The design spec is re-instantiated
/// at each n (nested for replicated families).
BiiiDecay biii_decay(const DesignSpec& spec, const GroundTruth& truth,
                     const std::vector<int>& n_values, int reps, std::uint64_t seed);

struct SupGapResult {
  double value = 0.0;          // max over evaluation points of |cv_risk - risk|
  double lambda_at_sup = 0.0;  // where the max is attained
  double mc_std_error = 0.0;   // Monte-Carlo error of the risk estimate there
};

/// sup over lambda of |cv_risk(lambda) - risk(lambda)|, evaluated on the
/// union of the CV curve's breakpoints, its interior vertices, and the risk
/// grid. The CV side is exact; the risk side carries Monte-Carlo error.
SupGapResult sup_cv_risk_gap(const Dataset& data, const CvCurve& curve,
                             const RiskContext& context, const std::vector<double>& risk_grid);
SupGapResult sup_cv_risk_gap(const DesignMatrix& design, const GroundTruth& truth, int m_draws,
                             std::uint64_t seed);

}  // namespace lassocv
