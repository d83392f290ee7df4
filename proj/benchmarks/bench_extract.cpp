#include <benchmark/benchmark.h>

#include <random>

#include "shapedecomp/decompose.hpp"

using namespace shapedecomp;

namespace {

const RandomAlternating& sample_psi() {
  static const RandomAlternating ra = [] {
    std::mt19937_64 rng(11);
    return random_alternating(rng, 2);
  }();
  return ra;
}

std::array<double, 9> sample_point() {
  return {0.31, -0.42, 0.77, -0.15, 0.52, 0.96, 0.08, -0.63, 0.44};
}

}  // namespace

static void BM_ExtractSymbolic(benchmark::State& state) {
  const Poly9& psi = sample_psi().psi;
  for (auto _ : state) benchmark::DoNotOptimize(extract_bosonic_symbolic(psi));
}
BENCHMARK(BM_ExtractSymbolic)->Unit(benchmark::kMillisecond);

static void BM_ExtractFromValues(benchmark::State& state) {
  const auto v = sample_point();
  const PolyEvaluator psi(sample_psi().psi);
  std::array<double, 36> pv;
  for (int j = 0; j < 36; ++j) pv[j] = psi(permute_point<double>(v, group_elements()[j]));
  for (auto _ : state) benchmark::DoNotOptimize(extract_from_values(pv, v));
}
BENCHMARK(BM_ExtractFromValues);

static void BM_ExtractSingleComponent(benchmark::State& state) {
  const auto v = sample_point();
  std::array<double, 36> pv;
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n;
  for (double& x : pv) x = n(rng);
  const int shape = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(extract_component(pv, v, shape));
}
BENCHMARK(BM_ExtractSingleComponent)->Arg(0)->Arg(32);
