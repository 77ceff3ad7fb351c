#include <benchmark/benchmark.h>

#include "qcorr/examples.hpp"
#include "qcorr/random.hpp"

using namespace qcorr;

namespace {

DensityMatrix random_state(int qubits) {
  Rng rng(1234);
  std::vector<std::string> labels;
  std::vector<int> dims;
  for (int k = 0; k < qubits; ++k) {
    labels.push_back(std::string(1, static_cast<char>('A' + k)));
    dims.push_back(2);
  }
  return rng.random_density(labels, dims);
}

}  // namespace

static void BM_Eigh(benchmark::State& state) {
  const DensityMatrix rho = random_state(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(eigh(rho.entries()));
  }
}
BENCHMARK(BM_Eigh)->Arg(2)->Arg(3)->Arg(4);

static void BM_PartialTrace(benchmark::State& state) {
  const DensityMatrix rho = random_state(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(partial_trace(rho, {"A", "B"}));
  }
}
BENCHMARK(BM_PartialTrace);

static void BM_PartialTranspose(benchmark::State& state) {
  const DensityMatrix rho = random_state(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(partial_transpose(rho, {"A"}));
  }
}
BENCHMARK(BM_PartialTranspose);

static void BM_ApplyUnitary(benchmark::State& state) {
  const DensityMatrix rho = random_state(3);
  const UnitaryOp gate = cnot("A", "C");
  for (auto _ : state) {
    benchmark::DoNotOptimize(apply_unitary(rho, gate));
  }
}
BENCHMARK(BM_ApplyUnitary);

static void BM_PptCheck(benchmark::State& state) {
  const DensityMatrix beta = cubitt_scenario().encoded;
  const CutSpec cut = make_cut(beta, {"A"});
  for (auto _ : state) {
    benchmark::DoNotOptimize(ppt_check(beta, cut));
  }
}
BENCHMARK(BM_PptCheck);

static void BM_Schmidt(benchmark::State& state) {
  Rng rng(77);
  const PureState psi = rng.random_pure({"A", "B", "C"}, {2, 2, 2});
  const CutSpec cut = make_cut(psi, {"A"});
  for (auto _ : state) {
    benchmark::DoNotOptimize(schmidt(psi, cut));
  }
}
BENCHMARK(BM_Schmidt);

static void BM_Localize(benchmark::State& state) {
  const DensityMatrix beta = cubitt_scenario().encoded;
  for (auto _ : state) {
    benchmark::DoNotOptimize(localize(beta));
  }
}
BENCHMARK(BM_Localize);
