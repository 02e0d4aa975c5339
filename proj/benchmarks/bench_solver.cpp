#include <benchmark/benchmark.h>

#include "adacd/dataset.hpp"
#include "adacd/solver.hpp"

namespace {

void run_epochs(benchmark::State& state, const char* scheme) {
  const adacd::Dataset ds = adacd::synthetic_lasso(100, 200, 0.12, 0.05, 3);
  const adacd::ProblemInstance p = adacd::make_lasso(ds, 4.0);
  for (auto _ : state) {
    adacd::SolverConfig cfg;
    cfg.scheme = adacd::SamplingScheme::parse(scheme);
    cfg.max_epochs = 5;
    cfg.seed = 1;
    benchmark::DoNotOptimize(adacd::run(p, ds, cfg));
  }
}

void BM_EpochsUniform(benchmark::State& state) { run_epochs(state, "uniform"); }
void BM_EpochsGapPerEpoch(benchmark::State& state) { run_epochs(state, "gap-per-epoch"); }
void BM_EpochsAdaGap(benchmark::State& state) { run_epochs(state, "ada-gap"); }

BENCHMARK(BM_EpochsUniform)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EpochsGapPerEpoch)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EpochsAdaGap)->Unit(benchmark::kMillisecond);

}  // namespace
