#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rpp/chromosome.hpp"
#include "rpp/individual.hpp"
#include "rpp/local_search.hpp"
#include "rpp/metrics.hpp"
#include "rpp/routing.hpp"

namespace rpp {

struct GaConfig {
  int pop_min = 100;               // P_L
  int pop_max = 200;               // P_H
  double elite_ratio = 0.8;        // n_E / n_P, the fitness base
  int generations = 100;           // G
  int stagnation_window = 10;      // G_m
  double p_targeted = 0.1;         // p_t
  double p_mutation = 0.1;         // p_m
  double p_mutation_boost = 0.3;   // p_m+
  double w_inf_min = 0.01;
  double w_inf_max = 100.0;
  double w_inf_initial = 1.0;
  double survivor_elite = 0.01;    // force-kept fraction of P_L, by penalized cost
  double refine_fraction = 0.2;    // offspring share handed to local search
  LsConfig ls;
  std::uint64_t seed = 1;
  // Exhaustive path-choice decode of the final candidates, bounded by the
  // total number of decodes.
  std::size_t polish_budget = 100000;

  void validate(int n_required) const;
};

struct TraceRow {
  int generation = 0;
  double best_cost = 0.0;                         // hours, running minimum
  std::optional<double> best_feasible_makespan;   // hours
  double mean_fitness = 0.0;                      // hours
  double p_m = 0.0;
  double w_inf = 0.0;
  double elapsed_s = 0.0;
};

using RunTrace = std::vector<TraceRow>;

// Normalized Hamming distance over both chromosome parts (2R positions).
double hamming(const Chromosome& a, const Chromosome& b);

// div for every member: mean distance to its two nearest other members, or 1
// when the population has fewer than 3 members.
std::vector<double> diversities(std::span<const Individual> population);

// cost * elite_ratio^div.
double fitness(double cost, double div, double elite_ratio);

// Refreshes div and fitness of every member against the whole population.
void assign_fitness(std::vector<Individual>& population, double elite_ratio);

// Nearest-endpoint service order from the depot followed by a greedy
// makespan-minimizing vehicle assignment. With `perturb`, each greedy step
// picks uniformly among candidates within 10% of the best increment.
Chromosome targeted_chromosome(const Instance& instance, const MetricTables& metrics,
                               const FleetConfig& fleet, Rng* perturb);

// ceil(p_t * P_L) targeted members (the first unperturbed), the rest random.
// Member i draws from stream derive_seed(seed, {0, i}).
std::vector<Individual> initial_population(const Decoder& decoder, const GaConfig& config,
                                           double w_inf);

// Binary tournament with replacement; the lower fitness wins, ties go to the
// earlier member.
std::size_t tournament_select(std::span<const Individual> population, Rng& rng);

struct GaState {
  std::vector<Individual> population;
  int generation = 0;
  double p_now = 0.1;
  double w_inf = 1.0;
  int stagnant = 0;  // generations since the running best cost last dropped
  double best_cost = 0.0;
  std::optional<Individual> best_feasible;    // least makespan among feasible
  std::optional<Individual> least_violation;  // least (violation, makespan)
};

// Stagnation and penalty controllers. `improved` is whether this generation
// lowered the running best penalized cost; `feasible_fraction` is measured
// on the retained population.
void adapt_schedules(GaState& state, const GaConfig& config, bool improved, double feasible_fraction);

// Records every member of `pool` as a potential incumbent.
void update_incumbents(GaState& state, std::span<const Individual> pool);

GaState initial_state(const Decoder& decoder, const GaConfig& config);

// One generation: offspring until the pool holds P_H, local search on the
// best refine_fraction of the offspring, survivor selection back to P_L.
// Returns the trace row with the p_m and w_inf that were in effect; the
// caller fills elapsed_s.
TraceRow generation_step(GaState& state, const Decoder& decoder, const GaConfig& config);

struct SolveResult {
  Chromosome chromosome;
  std::uint64_t decode_seed = 0;
  std::vector<std::size_t> path_choices;  // non-empty when the polish chose the paths
  RoutePlan plan;
  Evaluation eval;
  bool feasible = false;
  RunTrace trace;
};

using TraceCallback = std::function<void(const TraceRow&)>;

SolveResult solve(const Instance& instance, const MetricTables& metrics, const FleetConfig& fleet,
                  const GaConfig& config, const TraceCallback& on_generation = {});
SolveResult solve(const Instance& instance, const FleetConfig& fleet, const GaConfig& config);

// A PathPicker that replays `choices` in order.
PathPicker replay_picker(const std::vector<std::size_t>& choices);

// Calls `visit` with every path-choice vector for the given option counts, in
// odometer order (last position fastest).
void for_each_choice(std::span<const std::size_t> options,
                     const std::function<void(const std::vector<std::size_t>&)>& visit);

// CSV with a header row; lines starting with '#' carry the config echo.
// Costs are written in minutes.
void write_trace_csv(std::ostream& out, const RunTrace& trace,
                     const std::vector<std::pair<std::string, std::string>>& config_echo = {});
RunTrace read_trace_csv(std::istream& in);

}  // namespace rpp
