#include <doctest.h>

#include <cmath>

#include "lassocv/diagnostics.hpp"
#include "lassocv/errors.hpp"
#include "lassocv/experiment.hpp"
#include "lassocv/rng.hpp"
#include "test_support.hpp"

using namespace lassocv;

namespace {

GroundTruth default_truth(double sigma = 1.0) {
  Eigen::VectorXd theta(5);
  theta << 1.0, -1.0, 0.5, 0.0, 0.0;
  return GroundTruth::make(theta, sigma, NoiseFamily::gaussian());
}

DesignMatrix default_design(int n) {
  return generate_design(default_config().design.with_n(n));
}

}  // namespace

TEST_SUITE("diagnostics") {
  TEST_CASE("tail report: thresholds, bound and exceedance") {
    const int n = 100;
    const std::vector<double> ts = {1.0, 2.0};
    const long trials = 20000;
    const TailBoundReport gauss = quadratic_form_tail(NoiseFamily::gaussian(), n,
                                                      Eigen::VectorXd::Zero(n), ts, trials, 42);

    for (std::size_t k = 0; k < ts.size(); ++k) {
      const double t = ts[k];
      CHECK(gauss.g_sigma[k] ==
            doctest::Approx(n + 2.0 * std::sqrt(n * t) + 2.0 * t).epsilon(1e-12));
      CHECK(gauss.g_mu[k] == 0.0);
      CHECK(gauss.analytic_bound[k] == doctest::Approx(std::exp(-t)).epsilon(1e-12));
      const double allowance = gauss.analytic_bound[k] +
                               3.0 * std::sqrt(gauss.analytic_bound[k] *
                                               (1.0 - gauss.analytic_bound[k]) / trials);
      CHECK(gauss.empirical_exceedance[k] <= allowance);
      CHECK(gauss.empirical_exceedance[k] >= 0.0);
    }
    CHECK(gauss.mean_quadratic_form == doctest::Approx(1.0).epsilon(0.02));

    // Rademacher noise with zero mean has ||Z||^2 = n identically, so it
    // sits strictly inside the Gaussian exceedance at every t.
    const TailBoundReport rad = quadratic_form_tail(NoiseFamily::rademacher(), n,
                                                    Eigen::VectorXd::Zero(n), ts, trials, 42);
    for (std::size_t k = 0; k < ts.size(); ++k) {
      CHECK(rad.empirical_exceedance[k] <= gauss.empirical_exceedance[k]);
      CHECK(rad.empirical_exceedance[k] == 0.0);
    }
    CHECK(rad.mean_quadratic_form == doctest::Approx(1.0).epsilon(1e-12));

    // A shifted mean feeds g_mu.
    const Eigen::VectorXd mu = Eigen::VectorXd::Constant(n, 0.3);
    const TailBoundReport shifted =
        quadratic_form_tail(NoiseFamily::gaussian(), n, mu, ts, 10000, 43);
    for (std::size_t k = 0; k < ts.size(); ++k) {
      const double t = ts[k];
      const double expected = mu.squaredNorm() *
                              std::sqrt(1.0 + 4.0 * std::sqrt(t / n) + 4.0 * t / n);
      CHECK(shifted.g_mu[k] == doctest::Approx(expected).epsilon(1e-12));
      CHECK(shifted.empirical_exceedance[k] <= shifted.analytic_bound[k] + 0.02);
    }

    CHECK_THROWS_AS(
        quadratic_form_tail(NoiseFamily::gaussian(), n, Eigen::VectorXd::Zero(n), ts, 100, 1),
        DimensionMismatch);
  }

  TEST_CASE("decomposition: noiseless case is deterministic and tight") {
    const DesignMatrix design = default_design(20);
    const GroundTruth truth = default_truth(0.0);
    const DecompositionRecord rec = decomposition_terms(design, truth, 0.05, 4, 9);
    CHECK(rec.term_c == 0.0);
    CHECK(rec.se_a == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(rec.se_lhs == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(rec.lhs <= rec.term_a + rec.term_b + rec.term_c + 1e-12);
  }

  TEST_CASE("decomposition: flat region zeroes the estimator terms") {
    const DesignMatrix design = default_design(20);
    const GroundTruth truth = default_truth();
    const DecompositionRecord rec = decomposition_terms(design, truth, 1e6, 4, 10);
    CHECK(rec.term_a == 0.0);
    CHECK(rec.term_b == 0.0);
    CHECK(rec.lhs == doctest::Approx(rec.term_c).epsilon(1e-12));
  }

  TEST_CASE("decomposition inequality holds with shared draws") {
    const DesignMatrix design = default_design(30);
    const GroundTruth truth = default_truth();
    for (double lambda : {0.0, 0.02, 0.1, 0.3, 1.0}) {
      const DecompositionRecord rec = decomposition_terms(design, truth, lambda, 30, 11);
      CHECK(rec.lhs <=
            rec.term_a + rec.term_b + rec.term_c + 3.0 * rec.combined_std_error + 1e-12);
      // CRN makes the triangle inequality hold without the error allowance.
      CHECK(rec.lhs <= rec.term_a + rec.term_b + rec.term_c + 1e-12);
    }
  }

  TEST_CASE("mean convergence probe: noiseless and flat-region zeros") {
    const DesignMatrix design = default_design(20);
    const MeanConvergenceProbe silent =
        mean_convergence_probe(design, default_truth(0.0), {0.0, 0.05, 1e5}, 4, 12);
    CHECK(silent.sup_deviation == 0.0);
    for (double w : silent.weighted_sq_deviation) {
      CHECK(w == 0.0);
    }

    const MeanConvergenceProbe noisy =
        mean_convergence_probe(design, default_truth(), {0.0, 0.05, 1e7}, 8, 13);
    CHECK(noisy.max_abs_deviation.back() == 0.0);  // beyond every lambda_max
    CHECK(noisy.sup_deviation > 0.0);
    CHECK(noisy.sup_deviation ==
          *std::max_element(noisy.max_abs_deviation.begin(), noisy.max_abs_deviation.end()));
  }

  TEST_CASE("noise-weighted LOO-OLS l1 sums: zero without noise, decaying with n") {
    const ExperimentConfig config = default_config();
    const BiiiDecay silent = biii_decay(config.design, default_truth(0.0), {20, 40}, 3, 14);
    CHECK(silent.medians[0] == 0.0);
    CHECK(silent.medians[1] == 0.0);

    const BiiiDecay decay = biii_decay(config.design, default_truth(), {50, 800}, 40, 15);
    REQUIRE(decay.raw.size() == 2);
    CHECK(decay.raw[0].size() == 40);
    CHECK(decay.medians[0] / decay.medians[1] > 2.0);
  }

  TEST_CASE("sup gap: flat-region identity and brute-force agreement") {
    const DesignMatrix design = default_design(30);
    const GroundTruth truth = default_truth();
    const Dataset data = realize(design, truth, 1234);
    const CvCurve curve = cv_curve(data);
    const RiskContext context(design, truth, 40, 77);
    const std::vector<double> grid = default_lambda_grid(curve.lambda_top(), 30);
    const SupGapResult result = sup_cv_risk_gap(data, curve, context, grid);

    CHECK(result.value > 0.0);
    CHECK(result.lambda_at_sup >= 0.0);
    CHECK(result.lambda_at_sup <= curve.lambda_top());

    // Recompute by hand over the same evaluation points.
    std::vector<double> points = curve.breakpoints();
    const auto vs = curve.interval_vertices();
    points.insert(points.end(), vs.begin(), vs.end());
    for (double g : grid) points.push_back(g);
    double brute = 0.0;
    for (double lambda : points) {
      if (lambda < 0.0 || lambda > curve.lambda_top()) continue;
      brute = std::max(brute,
                       std::abs(curve.eval(lambda) - context.estimate_at(lambda).estimate));
    }
    CHECK(result.value == doctest::Approx(brute).epsilon(1e-12));

    // Beyond every realized lambda_max the gap is the null-model mismatch.
    const double huge = std::max(curve.lambda_top(), context.max_lambda_max()) * 2.0;
    const double expected =
        std::abs(data.response.squaredNorm() / data.n() -
                 (truth.theta.dot(design.gram() * truth.theta) + truth.sigma * truth.sigma));
    CHECK(std::abs(curve.eval(huge) - context.estimate_at(huge).estimate) ==
          doctest::Approx(expected).epsilon(1e-12));
  }

  TEST_CASE("sup gap convenience overload is deterministic") {
    const DesignMatrix design = default_design(20);
    const GroundTruth truth = default_truth();
    const SupGapResult a = sup_cv_risk_gap(design, truth, 20, 5);
    const SupGapResult b = sup_cv_risk_gap(design, truth, 20, 5);
    CHECK(a.value == b.value);
    CHECK(a.lambda_at_sup == b.lambda_at_sup);
  }
}
