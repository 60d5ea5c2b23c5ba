#include <benchmark/benchmark.h>

#include <vector>

#include "ccsm/bench.hpp"
#include "ccsm/bnc.hpp"
#include "ccsm/hull22.hpp"
#include "ccsm/lift_epi.hpp"
#include "ccsm/lift_si.hpp"
#include "ccsm/rng.hpp"

using namespace ccsm;

namespace {

Instance make_instance(int n, int k) {
  std::vector<double> weights(n);
  for (int i = 0; i < n; ++i) weights[i] = i % 2 == 0 ? 4.0 : 9.0;
  return Instance(std::move(weights), k, ConcaveFunction::sqrt_scaled(1.0));
}

void BM_LiftedEpiCut(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Instance inst = make_instance(n, std::max(2, n / 8));
  Permutation perm = Permutation::identity(n);
  for (auto _ : state) {
    LinearCut cut = lifted_epi_cut(inst, perm);
    benchmark::DoNotOptimize(cut);
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_LiftedEpiCut)->RangeMultiplier(2)->Range(8, 256)->Complexity();

void BM_LowerSiCut(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Instance inst = make_instance(n, std::max(2, n / 8));
  TwoWeightProfile profile = two_weight_profile(inst);
  SiParams params{0, WeightClass::kLower, profile.lower, profile.higher};
  for (auto _ : state) {
    LinearCut cut = lower_si_cut(inst, params);
    benchmark::DoNotOptimize(cut);
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_LowerSiCut)->RangeMultiplier(2)->Range(8, 256)->Complexity();

void BM_SeparationLp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Instance inst = make_instance(n, 2);
  std::vector<double> x(n, 1.8 / n);
  for (auto _ : state) {
    PolarRay ray = separation_lp(inst, x, 2);
    benchmark::DoNotOptimize(ray);
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_SeparationLp)->RangeMultiplier(2)->Range(4, 16)->Complexity();

void BM_HullMembership(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Instance inst = make_instance(n, 2);
  std::vector<double> x(n, 1.8 / n);
  for (auto _ : state) {
    bool inside = hull_membership(inst, 5.0, x, 2);
    benchmark::DoNotOptimize(inside);
  }
}
BENCHMARK(BM_HullMembership)->RangeMultiplier(2)->Range(4, 16);

void BM_BncSolve(benchmark::State& state) {
  GenConfig config{static_cast<int>(state.range(0)), 8.0, 3, 0.01, 11};
  GeneratedInstance gen = gen_instance(config);
  for (auto _ : state) {
    SolveReport report =
        bnc_solve(gen.instance, gen.objective, CutStrategy::kLepiLsi, BncLimits{});
    benchmark::DoNotOptimize(report);
  }
}
BENCHMARK(BM_BncSolve)->Arg(20)->Arg(30)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
