// Serial reference vs OpenMP path for the hot kernels. Outputs are identical by
// construction; only wall time differs.
#include <benchmark/benchmark.h>

#include "kmslab/estimates.hpp"
#include "kmslab/gibbs.hpp"
#include "kmslab/kms.hpp"
#include "kmslab/sampler.hpp"

using namespace kmslab;

namespace {
Exec exec_of(const benchmark::State& s) { return s.range(0) ? Exec::Parallel : Exec::Serial; }

InteractionSpec nls8() {
  InteractionSpec s;
  s.variant = Variant::NLS1D;
  s.dimension = 1;
  s.cutoff = 8;
  s.power = 4;
  return s;
}

void BM_SampleFree(benchmark::State& state) {
  SamplerConfig c{1.0, build_lattice(2, 8), 1, 0};
  for (auto _ : state) benchmark::DoNotOptimize(sample_free(c, 20000, exec_of(state)));
}

void BM_GibbsWeights(benchmark::State& state) {
  const auto e = sample_free({1.0, build_lattice(1, 8), 2, 0}, 20000);
  for (auto _ : state) benchmark::DoNotOptimize(gibbs_weights(e, nls8(), std::nullopt, exec_of(state)));
}

void BM_KmsExponential(benchmark::State& state) {
  const auto e = sample_free({1.0, build_lattice(1, 8), 3, 0}, 20000);
  auto l = e.samples[0].lattice_ptr();
  for (auto _ : state) {
    KmsEstimator<SpectralField> est(e, ComplexModel(nls8()), {}, exec_of(state));
    benchmark::DoNotOptimize(est.exponential(SpectralField::basis(l, 1), SpectralField::basis(l, 0)));
  }
}

void BM_ConvSums(benchmark::State& state) {
  ConvParams p;
  p.dimension = 3;
  p.delta = 0.5;
  p.probes = {8};
  p.truncation = 96;
  p.tail_guard = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(conv_sums(p, exec_of(state)));
}

void BM_Hypercontractivity(benchmark::State& state) {
  HyperParams hp;
  hp.samples = 200000;
  const auto m = chaos_battery()[8];
  for (auto _ : state) benchmark::DoNotOptimize(hypercontractivity_check(m, hp, exec_of(state)));
}
}  // namespace

// Argument 0: serial reference, 1: OpenMP.
BENCHMARK(BM_SampleFree)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_GibbsWeights)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_KmsExponential)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ConvSums)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Hypercontractivity)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
