#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "oodeval/metrics.hpp"
#include "oodeval/noise.hpp"
#include "oodeval/rng.hpp"
#include "oodeval/scores.hpp"
#include "oodeval/simulate.hpp"

using namespace oodeval;

namespace {

EnsembleBatch make_batch(std::size_t samples) {
  SimConfig config;
  config.num_classes = 200;
  config.num_members = 5;
  config.num_samples = samples;
  config.signal_scale = 4.0;
  config.member_noise = 1.0;
  config.seed = 7;
  return simulate_batch(config, 1);
}

DetectionSplit make_split(std::size_t per_side) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> dist(0.0, 1.0);
  DetectionSplit split;
  split.id_scores.resize(per_side);
  split.ood_scores.resize(per_side);
  for (double& v : split.id_scores) v = dist(rng);
  for (double& v : split.ood_scores) v = dist(rng) + 0.5;
  return split;
}

void BM_counter_rng_normal(benchmark::State& state) {
  const CounterRng rng(1);
  std::uint64_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rng.normal(0, i++, 0, 0));
  }
}
BENCHMARK(BM_counter_rng_normal);

void BM_simulate_batch(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(make_batch(static_cast<std::size_t>(state.range(0))));
  }
}
BENCHMARK(BM_simulate_batch)->Arg(256)->Arg(1024);

void BM_score_batch(benchmark::State& state) {
  const EnsembleBatch batch = make_batch(512);
  const ScoreId id = static_cast<ScoreId>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        score_batch(batch, id, is_single_model_score(id)
                                   ? std::optional<std::size_t>(0)
                                   : std::nullopt));
  }
  state.SetItemsProcessed(state.iterations() * 512);
}
BENCHMARK(BM_score_batch)
    ->Arg(static_cast<int>(ScoreId::kMutualInfo))
    ->Arg(static_cast<int>(ScoreId::kAvgEnergy))
    ->Arg(static_cast<int>(ScoreId::kEntropy));

void BM_auroc(benchmark::State& state) {
  const DetectionSplit split = make_split(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(auroc(split));
  }
}
BENCHMARK(BM_auroc)->Arg(500)->Arg(10000);

void BM_auroc_pairwise(benchmark::State& state) {
  const DetectionSplit split = make_split(500);
  for (auto _ : state) {
    benchmark::DoNotOptimize(auroc_pairwise_oracle(split));
  }
}
BENCHMARK(BM_auroc_pairwise);

void BM_fpr_at_95(benchmark::State& state) {
  const DetectionSplit split = make_split(10000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fpr_at_95_tpr(split));
  }
}
BENCHMARK(BM_fpr_at_95);

void BM_lanczos_resize(benchmark::State& state) {
  const CounterRng rng(3);
  const NoiseField field =
      render_noise_field(rng, 0, static_cast<int>(state.range(0)), 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lanczos_resize(field.image, 256));
  }
}
BENCHMARK(BM_lanczos_resize)->Arg(16)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
