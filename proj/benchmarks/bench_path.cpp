#include <benchmark/benchmark.h>

#include "lassocv/coordinate_descent.hpp"
#include "lassocv/experiment.hpp"
#include "lassocv/lasso_path.hpp"

namespace {

lassocv::Dataset make_dataset(int n) {
  const auto config = lassocv::default_config();
  const auto design = lassocv::generate_design(config.design.with_n(n));
  return lassocv::realize(design, config.truth(), 12345);
}

void BM_ComputePath(benchmark::State& state) {
  const auto data = make_dataset(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(lassocv::compute_path(data.design, data.response));
  }
}
BENCHMARK(BM_ComputePath)->Arg(50)->Arg(200)->Arg(800);

void BM_CoordinateDescent(benchmark::State& state) {
  const auto data = make_dataset(static_cast<int>(state.range(0)));
  const double lambda = lassocv::compute_path(data.design, data.response).lambda_max() * 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(lassocv::solve_lasso_at(data.design, data.response, lambda, 1e-8));
  }
}
BENCHMARK(BM_CoordinateDescent)->Arg(50)->Arg(200)->Arg(800);

void BM_PathEval(benchmark::State& state) {
  const auto data = make_dataset(200);
  const auto path = lassocv::compute_path(data.design, data.response);
  double lambda = 0.0;
  const double top = path.lambda_max();
  for (auto _ : state) {
    benchmark::DoNotOptimize(path.eval(lambda));
    lambda += top / 64.0;
    if (lambda > top) lambda = 0.0;
  }
}
BENCHMARK(BM_PathEval);

}  // namespace
