#include <benchmark/benchmark.h>

#include <random>

#include "symloop/loops.hpp"
#include "symloop/sampling.hpp"

namespace {

using namespace symloop;

MatrixLoop random_loop(int n, int width, std::mt19937_64& rng) {
  std::vector<Matrix> c;
  for (int m = -width; m <= width; ++m) c.push_back(sampling::random_matrix(n, n, rng, 1.0 / (1 + std::abs(m))));
  return MatrixLoop(-width, std::move(c));
}

void BM_LoopProduct(benchmark::State& state) {
  std::mt19937_64 rng(4);
  const int width = static_cast<int>(state.range(0));
  const MatrixLoop a = random_loop(3, width, rng);
  const MatrixLoop b = random_loop(3, width, rng);
  for (auto _ : state) benchmark::DoNotOptimize((a * b).max_degree());
  state.SetComplexityN(width);
}
BENCHMARK(BM_LoopProduct)->RangeMultiplier(2)->Range(2, 32)->Complexity();

void BM_LoopSamples(benchmark::State& state) {
  std::mt19937_64 rng(5);
  const MatrixLoop a = random_loop(3, 16, rng);
  for (auto _ : state) benchmark::DoNotOptimize(a.samples().size());
}
BENCHMARK(BM_LoopSamples);

void BM_Star(benchmark::State& state) {
  std::mt19937_64 rng(6);
  const MatrixLoop a = random_loop(4, 16, rng);
  for (auto _ : state) benchmark::DoNotOptimize(star(a).min_degree());
}
BENCHMARK(BM_Star);

}  // namespace
