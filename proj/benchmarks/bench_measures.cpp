#include <benchmark/benchmark.h>

#include "qcorr/examples.hpp"
#include "qcorr/random.hpp"

using namespace qcorr;

static void BM_VonNeumannEntropy(benchmark::State& state) {
  Rng rng(11);
  const DensityMatrix rho = rng.random_density({"A", "B", "C"}, {2, 2, 2});
  for (auto _ : state) {
    benchmark::DoNotOptimize(von_neumann_entropy(rho));
  }
}
BENCHMARK(BM_VonNeumannEntropy);

static void BM_RelativeEntropy(benchmark::State& state) {
  Rng rng(12);
  const DensityMatrix rho = rng.random_density({"A", "B"}, {2, 2});
  const DensityMatrix sigma = rng.random_density({"A", "B"}, {2, 2});
  for (auto _ : state) {
    benchmark::DoNotOptimize(relative_entropy(rho, sigma));
  }
}
BENCHMARK(BM_RelativeEntropy);

static void BM_Dephase(benchmark::State& state) {
  const DensityMatrix beta = cubitt_scenario().encoded;
  const MeasurementBasis basis = MeasurementBasis::from_angles("C", 0.4, 1.1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dephase(beta, basis));
  }
}
BENCHMARK(BM_Dephase);

static void BM_DiscordQubit(benchmark::State& state) {
  const DensityMatrix beta = cubitt_scenario().encoded;
  OptimizerOpts opts;
  opts.grid = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(discord(beta, "C", opts));
  }
}
BENCHMARK(BM_DiscordQubit)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_ReeNumericRestart(benchmark::State& state) {
  const DensityMatrix beta = cubitt_scenario().encoded;
  const CutSpec cut = make_cut(beta, {"A"});
  OptimizerOpts opts;
  opts.restarts = 1;  // cost of one seeded restart
  opts.sweeps = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ree_numeric(beta, cut, opts));
  }
}
BENCHMARK(BM_ReeNumericRestart)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_ReeFlagEval(benchmark::State& state) {
  const DensityMatrix gamma = example2_gamma(0.5);
  const CutSpec cut = make_cut(gamma, {"A"});
  for (auto _ : state) {
    benchmark::DoNotOptimize(ree(gamma, cut));
  }
}
BENCHMARK(BM_ReeFlagEval)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
