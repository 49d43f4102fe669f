#include <vector>

#include <benchmark/benchmark.h>

#include "lens/baseline.hpp"
#include "lens/matching.hpp"
#include "lens/rng.hpp"
#include "lens/snn.hpp"
#include "lens/training.hpp"

namespace {

using namespace lens;

std::vector<NormalizedFrame> random_frames(std::size_t count, std::size_t side, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<NormalizedFrame> frames(count);
  for (auto& f : frames) {
    f.intensities = Grid<double>(side, side);
    for (double& v : f.intensities) v = rng.uniform01();
  }
  return frames;
}

void BM_SequenceConvolve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto L = static_cast<std::size_t>(state.range(1));
  Rng rng(1);
  Grid<double> g(n, n);
  for (double& v : g) v = rng.uniform01();
  const SimilarityMatrix m(g);
  for (auto _ : state) benchmark::DoNotOptimize(sequence_convolve(m, L));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n * L));
}
BENCHMARK(BM_SequenceConvolve)->Args({100, 4})->Args({641, 4})->Args({641, 30});

void BM_Infer(benchmark::State& state) {
  const auto n_out = static_cast<std::size_t>(state.range(0));
  const auto model = init_network(49, 63, n_out, HyperParams{}, 2);
  const auto frame = random_frames(1, 7, 3).front();
  const auto raster = rate_encode(frame, 1000, 4);
  for (auto _ : state) benchmark::DoNotOptimize(infer(model, raster, IafParams{}));
}
BENCHMARK(BM_Infer)->Arg(100)->Arg(641);

void BM_SadMatrix(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const FrameDatabase refs{random_frames(n, 7, 5), CenterSelection{}};
  const FrameDatabase queries{random_frames(n, 7, 6), CenterSelection{}};
  for (auto _ : state) benchmark::DoNotOptimize(sad_matrix(refs, queries));
}
BENCHMARK(BM_SadMatrix)->Arg(100)->Arg(641);

void BM_TrainingEpoch(benchmark::State& state) {
  const auto frames = random_frames(641, 7, 7);
  std::vector<std::size_t> labels(frames.size());
  for (std::size_t k = 0; k < labels.size(); ++k) labels[k] = k;
  const auto untrained = init_network(49, 63, 641, HyperParams{}, 8);
  for (auto _ : state) {
    state.PauseTiming();
    auto model = untrained;
    state.ResumeTiming();
    if (state.range(0) == 0) {
      train_feature_layer(model, frames, {1, 0.01, std::nullopt});
    } else {
      train_output_layer(model, frames, labels, {1, 0.02, std::nullopt});
    }
    benchmark::DoNotOptimize(model);
  }
}
BENCHMARK(BM_TrainingEpoch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
