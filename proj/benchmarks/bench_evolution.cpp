#include <benchmark/benchmark.h>

#include <vector>

#include "rpp/evolution.hpp"
#include "rpp/genetic_ops.hpp"

namespace {

rpp::FleetConfig fleet22() {
  rpp::FleetConfig f;
  f.trucks = 2;
  f.drones_per_truck = 2;
  f.delta = 5;
  return f;
}

void BM_Crossover(benchmark::State& state) {
  const int r = static_cast<int>(state.range(0));
  const rpp::FleetConfig f = fleet22();
  rpp::Rng rng(5);
  const rpp::Chromosome a = rpp::random_chromosome(r, f, rng);
  const rpp::Chromosome b = rpp::random_chromosome(r, f, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rpp::crossover_ox(a, b, rng));
    benchmark::DoNotOptimize(rpp::crossover_pmx(a, b, rng));
    benchmark::DoNotOptimize(rpp::crossover_segment_preserving(a, b, f, rng));
  }
}
BENCHMARK(BM_Crossover)->Arg(25)->Arg(100);

void BM_Diversity(benchmark::State& state) {
  const rpp::FleetConfig f = fleet22();
  rpp::Rng rng(9);
  std::vector<rpp::Individual> pop(static_cast<std::size_t>(state.range(0)));
  for (rpp::Individual& ind : pop) ind.chromosome = rpp::random_chromosome(50, f, rng);
  for (auto _ : state) benchmark::DoNotOptimize(rpp::diversities(pop));
}
BENCHMARK(BM_Diversity)->Arg(100)->Arg(200)->Unit(benchmark::kMicrosecond);

// One short solve per iteration; the per-generation cost dominates the acceptance budget.
void BM_SolveGenerations(benchmark::State& state) {
  rpp::GeneratorConfig g;
  g.n_nodes = 100;
  g.n_edges = 200;
  g.n_required = static_cast<int>(state.range(0));
  g.seed = 1;
  const rpp::Instance inst = rpp::generate_instance(g);
  const rpp::MetricTables m = rpp::MetricTables::build(inst);
  rpp::GaConfig cfg;
  cfg.generations = 5;
  for (auto _ : state) benchmark::DoNotOptimize(rpp::solve(inst, m, fleet22(), cfg));
}
BENCHMARK(BM_SolveGenerations)->Arg(25)->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace
