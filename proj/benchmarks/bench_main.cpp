#include <benchmark/benchmark.h>

#include "mtd/em.hpp"
#include "mtd/empirics.hpp"
#include "mtd/lag_selection.hpp"
#include "mtd/model.hpp"
#include "mtd/random.hpp"
#include "mtd/sampler.hpp"

namespace {

mtd::MtdModel bench_model(std::size_t alphabet_size) {
  mtd::ModelSpec spec;
  spec.alphabet = mtd::Alphabet::numbered(alphabet_size);
  spec.lags = mtd::LagSet{1, 15, 30};
  spec.lambda0 = 0.05;
  mtd::RandomSource rng(11);
  return mtd::build_model(spec, rng);
}

mtd::Sample bench_sample(std::size_t n, std::size_t alphabet_size = 2) {
  mtd::RandomSource rng(12);
  return mtd::perfect_sample(bench_model(alphabet_size), n, rng);
}

void BM_PerfectSample(benchmark::State& state) {
  const auto model = bench_model(2);
  mtd::RandomSource rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(mtd::perfect_sample(model, state.range(0), rng));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PerfectSample)->Arg(10'000)->Arg(100'000);

void BM_CountsTable(benchmark::State& state) {
  const auto sample = bench_sample(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mtd::counts_table(sample, 40));
}
BENCHMARK(BM_CountsTable)->Arg(10'000)->Arg(100'000);

void BM_FsSelect(benchmark::State& state) {
  const auto sample = bench_sample(10'000);
  for (auto _ : state) benchmark::DoNotOptimize(mtd::fs_select(sample, static_cast<int>(state.range(0)), 3));
}
BENCHMARK(BM_FsSelect)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_CutSelect(benchmark::State& state) {
  const auto sample = bench_sample(10'000);
  const mtd::LagSet lags{1, 5, 15, 30};
  for (auto _ : state) benchmark::DoNotOptimize(mtd::cut_select(sample, 30, lags, {}));
}
BENCHMARK(BM_CutSelect)->Unit(benchmark::kMillisecond);

void BM_BicSelect(benchmark::State& state) {
  const auto sample = bench_sample(10'000);
  mtd::BicOptions options;
  options.maxl = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mtd::bic_select(sample, 12, options));
}
BENCHMARK(BM_BicSelect)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_EmFit(benchmark::State& state) {
  const auto model = bench_model(3);
  mtd::RandomSource rng(5);
  const auto sample = mtd::perfect_sample(model, 5'000, rng);
  mtd::EmParams init;
  init.lambdas = {0.25, 0.25, 0.25, 0.25};
  init.p0 = mtd::Distribution(3, 1.0 / 3.0);
  for (std::size_t i = 0; i < 3; ++i) init.pj.push_back(model.pj[(i + 1) % 3]);
  mtd::EmOptions options;
  options.min_increase.reset();
  options.max_iterations = 10;
  for (auto _ : state) benchmark::DoNotOptimize(mtd::em_fit(sample, model.lags, init, options));
}
BENCHMARK(BM_EmFit)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
