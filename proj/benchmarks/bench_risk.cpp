#include <benchmark/benchmark.h>

#include "lassocv/experiment.hpp"
#include "lassocv/risk.hpp"

namespace {

void BM_RiskContext(benchmark::State& state) {
  const auto config = lassocv::default_config();
  const auto design = lassocv::generate_design(config.design.with_n(static_cast<int>(state.range(0))));
  const auto truth = config.truth();
  for (auto _ : state) {
    benchmark::DoNotOptimize(lassocv::RiskContext(design, truth, 200, 7));
  }
}
BENCHMARK(BM_RiskContext)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_RiskCurve(benchmark::State& state) {
  const auto config = lassocv::default_config();
  const auto design = lassocv::generate_design(config.design.with_n(200));
  const auto truth = config.truth();
  const lassocv::RiskContext context(design, truth, 200, 7);
  const auto grid = lassocv::default_lambda_grid(context.max_lambda_max() * 1.01, 100);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lassocv::risk_curve(context, grid));
  }
}
BENCHMARK(BM_RiskCurve)->Unit(benchmark::kMillisecond);

}  // namespace
