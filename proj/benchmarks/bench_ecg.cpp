#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

#include "shapedecomp/density.hpp"
#include "shapedecomp/ecg.hpp"

using namespace shapedecomp;

namespace {

const ECGBasis& basis() {
  static const ECGBasis b = [] {
    std::ifstream in(SHAPEDECOMP_BENCH_BASIS);
    std::stringstream ss;
    ss << in.rdbuf();
    return basis_from_json(ss.str());
  }();
  return b;
}

}  // namespace

static void BM_PairElements(benchmark::State& state) {
  const auto& p = basis().primitives;
  for (auto _ : state) benchmark::DoNotOptimize(pair_elements(p[0], p[1]));
}
BENCHMARK(BM_PairElements);

static void BM_MatrixElements(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(matrix_elements(basis().primitives));
}
BENCHMARK(BM_MatrixElements)->Unit(benchmark::kMicrosecond);

static void BM_PermutedValues(benchmark::State& state) {
  const std::array<double, 9> v{0.3, -0.2, 0.5, 0.1, -0.4, 0.2, -0.3, 0.6, 0.05};
  for (auto _ : state) benchmark::DoNotOptimize(permuted_values(basis(), v));
}
BENCHMARK(BM_PermutedValues);

static void BM_OneElectronDensity(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(one_electron_density(basis(), {0.2, -0.1, 0.3}));
}
BENCHMARK(BM_OneElectronDensity);

static void BM_BosonicDensityMC(benchmark::State& state) {
  MonteCarloOptions o;
  o.samples = state.range(0);
  o.seed = 3;
  for (auto _ : state) benchmark::DoNotOptimize(bosonic_density(basis(), 32, {0.2, 0.0, 0.0}, o));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BosonicDensityMC)->Arg(2000)->Unit(benchmark::kMillisecond);
