#include <benchmark/benchmark.h>

#include <vector>

#include "densagg/aggregator.hpp"
#include "densagg/distances.hpp"
#include "densagg/lowerbound.hpp"
#include "densagg/sampling.hpp"

namespace {

using namespace densagg;

std::vector<PiecewiseDensity> family(std::size_t m, std::size_t n) {
  auto fam = choose_parameters(m, n, BoundParameter(2.0));
  auto set = build_separated_set(fam.code_length(), m);
  std::vector<PiecewiseDensity> out;
  for (const auto& w : set.words()) out.push_back(perturbed_density(fam, w));
  return out;
}

void BM_AveragedWeights(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto n = static_cast<std::size_t>(state.range(1));
  auto cands = family(m, n);
  CandidateSet set(cands);
  auto xs = sample(cands[1], n, 7);
  for (auto _ : state) benchmark::DoNotOptimize(averaged_weights(set, xs));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * m * n));
}
BENCHMARK(BM_AveragedWeights)->Args({16, 400})->Args({64, 1600});

void BM_KlDivergence(benchmark::State& state) {
  auto cands = family(64, 1000);
  for (auto _ : state) benchmark::DoNotOptimize(kl_divergence(cands[1], cands[2]));
}
BENCHMARK(BM_KlDivergence);

void BM_SeparatedSet(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_separated_set(d, std::size_t{1} << (d / 8)));
}
BENCHMARK(BM_SeparatedSet)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_Sample(benchmark::State& state) {
  DensitySampler sampler(family(64, 1000)[5]);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sampler.draw(1000, ++seed));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_Sample);

void BM_YatracosSelect(benchmark::State& state) {
  auto cands = family(16, 500);
  CandidateSet set(cands);
  auto xs = sample(cands[3], 500, 1);
  for (auto _ : state) benchmark::DoNotOptimize(yatracos_select(set, xs));
}
BENCHMARK(BM_YatracosSelect);

}  // namespace
BENCHMARK_MAIN();
