#include <benchmark/benchmark.h>

#include <random>

#include "iet/diffusion.hpp"
#include "iet/experiment.hpp"

namespace {

iet::ColorField random_field(std::size_t n) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  iet::ColorField f(n);
  for (auto& v : f) v = u(rng);
  return f;
}

void BM_DiffusionParallel(benchmark::State& state) {
  auto a = random_field(static_cast<std::size_t>(state.range(0)));
  iet::ColorField b(a.size());
  for (auto _ : state) {
    iet::diffusion_step_into(a, b, 0.5);
    std::swap(a, b);
    benchmark::DoNotOptimize(a.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_DiffusionSerial(benchmark::State& state) {
  auto a = random_field(static_cast<std::size_t>(state.range(0)));
  iet::ColorField b(a.size());
  for (auto _ : state) {
    iet::reference::diffusion_step_into(a, b, 0.5);
    std::swap(a, b);
    benchmark::DoNotOptimize(a.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_EnsembleParallel(benchmark::State& state) {
  const iet::EnsembleSpec spec{4, {7, 5}, 0.5, state.range(0), 2.0, {}};
  for (auto _ : state) benchmark::DoNotOptimize(iet::run_ensemble(spec).mean_norm.back());
}

void BM_EnsembleSerial(benchmark::State& state) {
  const iet::EnsembleSpec spec{4, {7, 5}, 0.5, state.range(0), 2.0, {}};
  for (auto _ : state) benchmark::DoNotOptimize(iet::reference::run_ensemble(spec).mean_norm.back());
}

}  // namespace

BENCHMARK(BM_DiffusionParallel)->Arg(888)->Arg(6187)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_DiffusionSerial)->Arg(888)->Arg(6187)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_EnsembleParallel)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnsembleSerial)->Arg(500)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
