#include <benchmark/benchmark.h>

#include <random>

#include "proteinoid/boolean.hpp"
#include "proteinoid/electrodes.hpp"
#include "proteinoid/ensemble.hpp"
#include "proteinoid/fhn.hpp"
#include "proteinoid/graph.hpp"

using namespace proteinoid;

namespace {

// Whole grid excited so every cell is swept.
Simulation excited(int width, int height, unsigned workers) {
  const ConductiveMask mask(width, height, true);
  StimulusSchedule schedule;
  schedule.entries.push_back({stimulus_nodes(mask, {width / 2, height / 2}, 4.0), 0.5, 0, 500});
  Simulation sim(mask, FhnParams{}, std::move(schedule), workers);
  sim.run(200);
  return sim;
}

void BM_SimulationStep(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  Simulation sim = excited(side, side, static_cast<unsigned>(state.range(1)));
  for (auto _ : state) sim.step();
  state.SetItemsProcessed(state.iterations() * side * side);
}
BENCHMARK(BM_SimulationStep)->Args({256, 1})->Args({1000, 1})->Args({1000, 4});

void BM_ReferenceStep(benchmark::State& state) {
  const Lattice lattice(ConductiveMask(256, 256, true));
  FieldState s = FieldState::zeros(lattice.size());
  for (std::size_t i = 0; i < s.u.size(); ++i) s.u[i] = 0.001 * static_cast<double>(i % 97);
  for (auto _ : state) {
    s = step(lattice, s, FhnParams{}, {});
    benchmark::DoNotOptimize(s.u.data());
  }
  state.SetItemsProcessed(state.iterations() * 256 * 256);
}
BENCHMARK(BM_ReferenceStep);

void BM_WalshSpectrum(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  std::vector<std::uint8_t> t(std::size_t{1} << k);
  for (auto& b : t) b = rng() & 1;
  const BooleanFunction f(k, std::move(t));
  for (auto _ : state) benchmark::DoNotOptimize(walsh_spectrum(f));
}
BENCHMARK(BM_WalshSpectrum)->Arg(8)->Arg(16);

void BM_BoolMetrics(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  std::mt19937_64 rng(2);
  std::vector<std::uint8_t> t(std::size_t{1} << k);
  for (auto& b : t) b = rng() & 1;
  const BooleanFunction f(k, std::move(t));
  for (auto _ : state) benchmark::DoNotOptimize(bool_metrics(f));
}
BENCHMARK(BM_BoolMetrics)->Arg(4)->Arg(8);

void BM_GraphMetrics(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  std::mt19937_64 rng(3);
  FunctionalGraph g;
  for (std::uint32_t v = 0; v < n; ++v) g.image.push_back(static_cast<std::uint32_t>(rng() % n));
  for (auto _ : state) benchmark::DoNotOptimize(graph_metrics(g));
}
BENCHMARK(BM_GraphMetrics)->Arg(16)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
