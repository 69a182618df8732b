#include <benchmark/benchmark.h>

#include "rpp/local_search.hpp"
#include "rpp/metrics.hpp"
#include "rpp/routing.hpp"

namespace {

struct Workspace {
  rpp::Instance inst;
  rpp::MetricTables metrics;
  rpp::FleetConfig fleet;

  Workspace(int nodes, int required, int trucks, int drones) {
    rpp::GeneratorConfig g;
    g.n_nodes = nodes;
    g.n_edges = 2 * nodes;
    g.n_required = required;
    g.seed = 1;
    inst = rpp::generate_instance(g);
    metrics = rpp::MetricTables::build(inst);
    fleet.trucks = trucks;
    fleet.drones_per_truck = drones;
    fleet.delta = 5;
    fleet.tau = 1.0;
  }
};

void BM_MetricTables(benchmark::State& state) {
  rpp::GeneratorConfig g;
  g.n_nodes = static_cast<int>(state.range(0));
  g.n_edges = 2 * g.n_nodes;
  g.n_required = g.n_nodes / 5;
  g.seed = 1;
  const rpp::Instance inst = rpp::generate_instance(g);
  for (auto _ : state) benchmark::DoNotOptimize(rpp::MetricTables::build(inst));
}
BENCHMARK(BM_MetricTables)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

// Arguments: nodes, required arcs, trucks, drones per truck.
void BM_Decode(benchmark::State& state) {
  const Workspace w(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)),
                    static_cast<int>(state.range(2)), static_cast<int>(state.range(3)));
  const rpp::Decoder dec(w.inst, w.metrics, w.fleet);
  rpp::Rng rng(7);
  const rpp::Chromosome c = rpp::random_chromosome(w.inst.num_required(), w.fleet, rng);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(dec.evaluate(c, ++seed));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Decode)
    ->Args({50, 15, 1, 1})
    ->Args({100, 30, 2, 2})
    ->Args({200, 50, 3, 1})
    ->Args({200, 100, 2, 2})
    ->Args({500, 100, 2, 2});

void BM_Refine(benchmark::State& state) {
  const Workspace w(100, static_cast<int>(state.range(0)), 2, 2);
  const rpp::Decoder dec(w.inst, w.metrics, w.fleet);
  rpp::Rng rng(11);
  const rpp::Individual start =
      rpp::make_individual(rpp::random_chromosome(w.inst.num_required(), w.fleet, rng), 3, dec, 1.0);
  for (auto _ : state) {
    rpp::LsContext ctx{dec, 1.0, rpp::LsConfig{}, rng};
    benchmark::DoNotOptimize(rpp::refine(start, ctx));
  }
}
BENCHMARK(BM_Refine)->Arg(30)->Arg(60)->Unit(benchmark::kMillisecond);

}  // namespace
