#include <benchmark/benchmark.h>

#include "lassocv/cv.hpp"
#include "lassocv/experiment.hpp"

namespace {

lassocv::Dataset make_dataset(int n) {
  const auto config = lassocv::default_config();
  const auto design = lassocv::generate_design(config.design.with_n(n));
  return lassocv::realize(design, config.truth(), 999);
}

void BM_LooPaths(benchmark::State& state) {
  const auto data = make_dataset(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(lassocv::loo_paths(data));
  }
}
BENCHMARK(BM_LooPaths)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_CvCurveAssembly(benchmark::State& state) {
  const auto data = make_dataset(static_cast<int>(state.range(0)));
  const auto loo = lassocv::loo_paths(data);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lassocv::cv_curve(data, loo));
  }
}
BENCHMARK(BM_CvCurveAssembly)->Arg(50)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);

void BM_LooStability(benchmark::State& state) {
  const auto data = make_dataset(static_cast<int>(state.range(0)));
  const auto loo = lassocv::loo_paths(data);
  const auto full = lassocv::compute_path(data.design, data.response);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lassocv::loo_stability(full, loo));
  }
}
BENCHMARK(BM_LooStability)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace
