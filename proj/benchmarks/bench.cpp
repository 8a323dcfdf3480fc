#include <benchmark/benchmark.h>

#include "fairgap/bounds.hpp"
#include "fairgap/erm.hpp"
#include "fairgap/gaps.hpp"
#include "fairgap/rng.hpp"
#include "fairgap/synth.hpp"

namespace {

using namespace fairgap;

void BM_ExactGapsTabular(benchmark::State& state) {
  Rng rng(1);
  const TabularInstance instance = random_instance(rng, 6, 6, 3, 3);
  const Score score{random_table_score(rng, instance.num_x())};
  for (auto _ : state) {
    benchmark::DoNotOptimize(exact_gaps_tabular(instance, score));
  }
}
BENCHMARK(BM_ExactGapsTabular);

void BM_EstimateGaps(benchmark::State& state) {
  Rng rng(2);
  const TabularInstance instance = random_instance(rng, 6, 6, 3, 3);
  const TableScore table = random_table_score(rng, instance.num_x());
  const LabeledDataset ds = instance.sample(static_cast<std::size_t>(state.range(0)), 3);
  BinningConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_gaps(ds, Score{table}, config));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EstimateGaps)->Arg(1 << 12)->Arg(1 << 16);

void BM_TrainLogistic(benchmark::State& state) {
  Rng rng(4);
  const TabularInstance instance = random_instance(rng, 6, 6, 2, 2);
  const LabeledDataset ds = instance.sample(static_cast<std::size_t>(state.range(0)), 5);
  TrainConfig config;
  config.max_iters = 200;
  for (auto _ : state) {
    benchmark::DoNotOptimize(train_logistic(ds, config));
  }
}
BENCHMARK(BM_TrainLogistic)->Arg(1 << 10)->Arg(1 << 13);

void BM_CircleQuadrature(benchmark::State& state) {
  const Vec2 theta_hat{1.0, 0.0};
  const Vec2 theta{0.6, 0.8};
  const Vec2 w{0.0, 1.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        quadrature_circle_gaps(theta_hat, theta, w, static_cast<std::size_t>(state.range(0))));
  }
}
BENCHMARK(BM_CircleQuadrature)->Arg(1 << 14)->Arg(1 << 18);

}  // namespace

BENCHMARK_MAIN();
