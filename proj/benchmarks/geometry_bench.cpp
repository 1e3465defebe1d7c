#include <benchmark/benchmark.h>

#include <vector>

#include "symloop/geometry.hpp"

namespace {

using namespace symloop;

const std::vector<cplx> kPoints{{0.4, -0.3}, {-0.6, 0.2}, {0.1, 0.7}};

void BM_GaussBundleClifford(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const BundleMap phi = AnalyticFrame::clifford(n).span();
  for (auto _ : state) {
    const BundleMap g = gauss_bundle(phi, n - 1);
    benchmark::DoNotOptimize(g.value(kPoints.front()).norm());
  }
}
BENCHMARK(BM_GaussBundleClifford)->DenseRange(3, 6)->Unit(benchmark::kMicrosecond);

void BM_GaussBundleGrid(benchmark::State& state) {
  const BundleMap psi = AnalyticFrame::veronese(4).span();
  const ZGrid grid = ZGrid::square(0.5, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gauss_bundle(psi, grid).values.size());
}
BENCHMARK(BM_GaussBundleGrid)->Arg(5)->Arg(11)->Unit(benchmark::kMillisecond);

void BM_DiffCondition(benchmark::State& state) {
  const BundleMap psi = AnalyticFrame::veronese(4).span();
  const auto alpha = alpha_builder_holo(psi, 3, kPoints);
  const UnitaryField field = grassmannian_field(psi);
  for (auto _ : state) benchmark::DoNotOptimize(diff_condition_check(field, alpha, kPoints).max());
}
BENCHMARK(BM_DiffCondition)->Unit(benchmark::kMillisecond);

}  // namespace
