#include <doctest.h>

#include <cmath>

#include "lassocv/errors.hpp"
#include "lassocv/experiment.hpp"
#include "lassocv/risk.hpp"
#include "lassocv/rng.hpp"
#include "test_support.hpp"

using namespace lassocv;

namespace {

GroundTruth default_truth() {
  Eigen::VectorXd theta(5);
  theta << 1.0, -1.0, 0.5, 0.0, 0.0;
  return GroundTruth::make(theta, 1.0, NoiseFamily::gaussian());
}

DesignMatrix default_design(int n) {
  return generate_design(default_config().design.with_n(n));
}

}  // namespace

TEST_SUITE("risk_engine") {
  TEST_CASE("noiseless risk at lambda zero is exactly the irreducible floor") {
    const DesignMatrix design = default_design(50);
    GroundTruth truth = default_truth();
    truth.sigma = 0.0;
    const RiskEstimate est = risk_at(design, truth, 0.0, 8, 3);
    CHECK(est.estimate <= 1e-18);
    CHECK(est.std_error <= 1e-18);
  }

  TEST_CASE("least-squares anchor: risk at lambda zero is sigma^2 (1 + p/n)") {
    const int n = 100;
    const DesignMatrix design = default_design(n);
    const GroundTruth truth = default_truth();
    const RiskEstimate est = risk_at(design, truth, 0.0, 1000, 12345);
    const double expected = 1.0 * (1.0 + 5.0 / static_cast<double>(n));
    CHECK(std::abs(est.estimate - expected) <= 3.0 * est.std_error);
  }

  TEST_CASE("saturated-penalty anchor: risk approaches the null-model value") {
    const DesignMatrix design = default_design(50);
    const GroundTruth truth = default_truth();
    const RiskContext context(design, truth, 200, 777);
    const double huge = context.max_lambda_max() * 2.0;
    const RiskEstimate est = context.estimate_at(huge);
    const double expected = truth.theta.dot(design.gram() * truth.theta) + 1.0;
    // Every replicate path is flat at zero there, so the value is exact.
    CHECK(est.estimate == doctest::Approx(expected).epsilon(1e-12));
    CHECK(est.std_error <= 1e-12);
  }

  TEST_CASE("common random numbers make curves bit-reproducible") {
    const DesignMatrix design = default_design(50);
    const GroundTruth truth = default_truth();
    const std::vector<double> grid = default_lambda_grid(1.0, 20);
    const RiskCurve a = risk_curve(design, truth, grid, 50, 99);
    const RiskCurve b = risk_curve(design, truth, grid, 50, 99);
    REQUIRE(a.estimates.size() == b.estimates.size());
    for (std::size_t g = 0; g < a.estimates.size(); ++g) {
      CHECK(a.estimates[g] == b.estimates[g]);
      CHECK(a.std_errors[g] == b.std_errors[g]);
    }
    CHECK(a.lambda_star == b.lambda_star);
  }

  TEST_CASE("zero target: ties above every knot resolve to the largest lambda") {
    const DesignMatrix design = default_design(50);
    const GroundTruth truth = GroundTruth::make(Eigen::VectorXd::Zero(5), 1.0,
                                                NoiseFamily::gaussian());
    const RiskContext context(design, truth, 60, 4);
    const double top = context.max_lambda_max() * 1.5;
    const std::vector<double> grid = default_lambda_grid(top, 40);
    const RiskCurve curve = risk_curve(context, grid);
    // Shrinking toward the true zero vector only helps; the flat region at
    // the top attains the minimum sigma^2 and the tie-break takes its end.
    CHECK(curve.lambda_star == grid.back());
    CHECK(curve.estimates.back() == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("standard errors shrink with more draws") {
    const DesignMatrix design = default_design(50);
    const GroundTruth truth = default_truth();
    const double lambda = 0.05;
    const RiskEstimate small = risk_at(design, truth, lambda, 200, 31);
    const RiskEstimate large = risk_at(design, truth, lambda, 800, 31);
    CHECK(large.std_error < small.std_error);
  }

  TEST_CASE("paired gap: identity, antisymmetry, argmin dominance") {
    const DesignMatrix design = default_design(50);
    const GroundTruth truth = default_truth();
    const RiskContext context(design, truth, 100, 8);
    CHECK(risk_gap(context, 0.3, 0.3).estimate == 0.0);

    const RiskEstimate ab = risk_gap(context, 0.05, 0.2);
    const RiskEstimate ba = risk_gap(context, 0.2, 0.05);
    CHECK(ab.estimate == doctest::Approx(-ba.estimate).epsilon(1e-14));
    CHECK(ab.std_error == doctest::Approx(ba.std_error).epsilon(1e-12));

    const std::vector<double> grid = default_lambda_grid(context.max_lambda_max(), 50, {0.07});
    const RiskCurve curve = risk_curve(context, grid);
    // The star is the argmin over a grid containing 0.07, so the paired gap
    // from any grid point is nonnegative by construction.
    CHECK(risk_gap(context, 0.07, curve.lambda_star).estimate >= 0.0);
  }

  TEST_CASE("grid refinement moves the estimated minimum by less than one std error") {
    const DesignMatrix design = default_design(100);
    const GroundTruth truth = default_truth();
    const RiskContext context(design, truth, 200, 2024);

    const double top = context.max_lambda_max() * 1.01;
    const std::vector<double> coarse = default_lambda_grid(top, 100);
    std::vector<double> knots;
    for (const LassoPath& path : context.replicate_paths()) {
      knots.insert(knots.end(), path.knots().begin(), path.knots().end());
    }
    const std::vector<double> fine = default_lambda_grid(top, 100, knots);

    const RiskCurve a = risk_curve(context, coarse);
    const RiskCurve b = risk_curve(context, fine);
    const double min_a = *std::min_element(a.estimates.begin(), a.estimates.end());
    const double min_b = *std::min_element(b.estimates.begin(), b.estimates.end());
    const double se_at_min =
        b.std_errors[static_cast<std::size_t>(std::min_element(b.estimates.begin(),
                                                               b.estimates.end()) -
                                              b.estimates.begin())];
    CHECK(std::abs(min_a - min_b) < se_at_min);
  }

  TEST_CASE("input validation") {
    const DesignMatrix design = default_design(50);
    const GroundTruth truth = default_truth();
    CHECK_THROWS_AS(RiskContext(design, truth, 1, 5), DimensionMismatch);
    const RiskContext context(design, truth, 4, 5);
    CHECK_THROWS_AS(risk_curve(context, {}), DimensionMismatch);
    CHECK_THROWS_AS(risk_curve(context, {0.5, 0.1}), DimensionMismatch);
    CHECK_THROWS_AS(risk_gap(context, -1.0, 0.0), DimensionMismatch);
  }
}
