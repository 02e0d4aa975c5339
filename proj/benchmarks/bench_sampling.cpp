#include <benchmark/benchmark.h>

#include <vector>

#include "adacd/rng.hpp"
#include "adacd/sampling.hpp"

namespace {

std::vector<double> random_weights(std::size_t n) {
  adacd::SplitMix64 rng(42);
  std::vector<double> w(n);
  for (double& x : w) x = rng.next_double() + 0.01;
  return w;
}

void BM_SumTreeSample(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const adacd::SumTree tree(random_weights(n));
  adacd::SplitMix64 rng(7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tree.sample(rng.next_double()));
  }
}
BENCHMARK(BM_SumTreeSample)->Range(64, 1 << 18);

void BM_SumTreeUpdate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  adacd::SumTree tree(random_weights(n));
  adacd::SplitMix64 rng(7);
  for (auto _ : state) {
    tree.update(static_cast<std::size_t>(rng.next_below(n)), rng.next_double());
  }
  benchmark::DoNotOptimize(tree.total());
}
BENCHMARK(BM_SumTreeUpdate)->Range(64, 1 << 18);

// Baseline the tree is meant to beat at scale.
void BM_LinearScanSample(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::vector<double> weights = random_weights(n);
  double total = 0.0;
  for (const double w : weights) total += w;
  adacd::SplitMix64 rng(7);
  for (auto _ : state) {
    const double target = rng.next_double() * total;
    double cum = 0.0;
    std::size_t picked = n - 1;
    for (std::size_t i = 0; i < n; ++i) {
      cum += weights[i];
      if (target < cum) {
        picked = i;
        break;
      }
    }
    benchmark::DoNotOptimize(picked);
  }
}
BENCHMARK(BM_LinearScanSample)->Range(64, 1 << 18);

}  // namespace
