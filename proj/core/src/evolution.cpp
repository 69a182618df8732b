#include "rpp/evolution.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

#include "rpp/genetic_ops.hpp"

namespace rpp {

void GaConfig::validate(int n_required) const {
  if (pop_min < 1 || pop_min > pop_max) throw std::invalid_argument("population bounds need 1 <= P_L <= P_H");
  if (!(elite_ratio > 0.0 && elite_ratio <= 1.0)) throw std::invalid_argument("elite ratio must lie in (0, 1]");
  if (generations < 0) throw std::invalid_argument("generations must be non-negative");
  if (stagnation_window < 1) throw std::invalid_argument("stagnation window must be at least 1");
  if (p_targeted < 0.0 || p_targeted > 1.0) throw std::invalid_argument("p_t must lie in [0, 1]");
  if (!(p_mutation > 0.0 && p_mutation <= p_mutation_boost && p_mutation_boost <= 1.0)) {
    throw std::invalid_argument("mutation rates need 0 < p_m <= p_m+ <= 1");
  }
  if (!(w_inf_min > 0.0 && w_inf_min <= w_inf_initial && w_inf_initial <= w_inf_max)) {
    throw std::invalid_argument("initial w_inf must lie within [w_inf_min, w_inf_max]");
  }
  if (survivor_elite < 0.0 || survivor_elite > 1.0) throw std::invalid_argument("elitism fraction must lie in [0, 1]");
  if (!(refine_fraction >= 0.0 && refine_fraction <= 1.0)) {
    throw std::invalid_argument("refine fraction must lie in [0, 1]");
  }
  // The default b = 3 exceeds R on tiny instances; or-opt already caps blocks at R.
  LsConfig effective = ls;
  effective.or_opt_block = std::min(ls.or_opt_block, std::max(1, n_required));
  effective.validate(n_required);
}

namespace {

int ceil_count(double fraction, int n) {
  return std::clamp(static_cast<int>(std::ceil(fraction * n - 1e-9)), 0, n);
}

// Indices of `pool` ordered by `key`, ties by index.
template <typename Key>
std::vector<std::size_t> order_by(const std::vector<Individual>& pool, Key key) {
  std::vector<std::size_t> idx(pool.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return key(pool[a]) < key(pool[b]); });
  return idx;
}

double mean_fitness(const std::vector<Individual>& pop) {
  double sum = 0.0;
  for (const Individual& ind : pop) sum += ind.fitness;
  return pop.empty() ? 0.0 : sum / static_cast<double>(pop.size());
}

double min_cost(const std::vector<Individual>& pop) {
  double best = std::numeric_limits<double>::infinity();
  for (const Individual& ind : pop) best = std::min(best, ind.cost);
  return best;
}

bool better_outcome(const Evaluation& a, const Evaluation& b) {
  if (a.feasible != b.feasible) return a.feasible;
  if (a.feasible) return a.makespan < b.makespan;
  if (a.violation != b.violation) return a.violation < b.violation;
  return a.makespan < b.makespan;
}

}  // namespace

double hamming(const Chromosome& a, const Chromosome& b) {
  const int n = a.size();
  if (n == 0) return 0.0;
  int diff = 0;
  for (int p = 0; p < n; ++p) {
    diff += (a.seq[p] != b.seq[p]) + (a.assign[p] != b.assign[p]);
  }
  return static_cast<double>(diff) / (2.0 * n);
}

std::vector<double> diversities(std::span<const Individual> population) {
  const std::size_t n = population.size();
  std::vector<double> div(n, 1.0);
  if (n < 3) return div;
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      d[i * n + j] = d[j * n + i] = hamming(population[i].chromosome, population[j].chromosome);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double m1 = std::numeric_limits<double>::infinity();
    double m2 = m1;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double x = d[i * n + j];
      if (x < m1) {
        m2 = m1;
        m1 = x;
      } else if (x < m2) {
        m2 = x;
      }
    }
    div[i] = (m1 + m2) / 2.0;
  }
  return div;
}

double fitness(double cost, double div, double elite_ratio) { return cost * std::pow(elite_ratio, div); }

void assign_fitness(std::vector<Individual>& population, double elite_ratio) {
  const std::vector<double> div = diversities(population);
  for (std::size_t i = 0; i < population.size(); ++i) {
    population[i].div = div[i];
    population[i].fitness = fitness(population[i].cost, div[i], elite_ratio);
  }
}

Chromosome targeted_chromosome(const Instance& instance, const MetricTables& metrics,
                               const FleetConfig& fleet, Rng* perturb) {
  const int n = instance.num_required();
  Chromosome c;
  c.seq.reserve(n);
  c.assign.reserve(n);

  struct Candidate {
    int task;  // signed
    double increment;
  };
  std::vector<bool> done(n + 1, false);
  NodeId at = instance.depot;
  std::vector<Candidate> cands;
  for (int step = 0; step < n; ++step) {
    cands.clear();
    double best = std::numeric_limits<double>::infinity();
    for (int t = 1; t <= n; ++t) {
      if (done[t]) continue;
      const auto [u, v] = metrics.endpoints(t);
      const double du = metrics.distance(at, u);
      const double dv = metrics.distance(at, v);
      const Candidate cand{dv < du ? -t : t, std::min(du, dv) + instance.task_edge(t).length};
      best = std::min(best, cand.increment);
      cands.push_back(cand);
    }
    const double limit = perturb != nullptr ? best * 1.1 + 1e-12 : best;
    std::vector<const Candidate*> near;
    for (const Candidate& cand : cands) {
      if (cand.increment <= limit) near.push_back(&cand);
    }
    const Candidate* pick = near.front();
    if (perturb != nullptr && near.size() > 1) {
      pick = near[uniform_int(*perturb, 0, static_cast<int>(near.size()) - 1)];
    }
    done[std::abs(pick->task)] = true;
    c.seq.push_back(pick->task);
    const auto [u, v] = metrics.endpoints(std::abs(pick->task));
    at = pick->task > 0 ? v : u;
  }

  // Projected schedule: each system tracks its truck position and clock, each
  // drone its ready time. Drone options are single-arc round trips from the
  // truck's current node.
  const int k = fleet.trucks;
  const int m = fleet.drones_per_truck;
  std::vector<NodeId> truck_at(k, instance.depot);
  std::vector<double> truck_t(k, 0.0);
  std::vector<double> drone_ready(static_cast<std::size_t>(k) * m, 0.0);
  auto system_completion = [&](int s, NodeId node, double t, int drone_slot, double drone_t) {
    double done_t = t + metrics.distance(node, instance.depot) / instance.truck_speed;
    for (int j = 0; j < m; ++j) {
      const double r = j == drone_slot ? drone_t : drone_ready[static_cast<std::size_t>(s) * m + j];
      done_t = std::max(done_t, r);
    }
    return done_t;
  };
  std::vector<double> completion(k, 0.0);
  for (int p = 0; p < n; ++p) {
    const int task = c.seq[p];
    const Edge& e = instance.task_edge(std::abs(task));
    const NodeId tail = task > 0 ? e.u : e.v;
    const NodeId head = task > 0 ? e.v : e.u;
    double best_span = std::numeric_limits<double>::infinity();
    double best_own = best_span;
    int best_v = fleet.truck_vehicle(0);
    double best_sys = 0.0;
    for (int v = 1; v <= fleet.num_vehicles(); ++v) {
      const int s = fleet.system_of(v);
      double own = 0.0;
      double sys = 0.0;
      if (fleet.is_truck(v)) {
        own = truck_t[s] + (metrics.distance(truck_at[s], tail) + e.length) / instance.truck_speed;
        sys = system_completion(s, head, own, -1, 0.0);
      } else {
        const double flight = drone_leg_time(instance, truck_at[s], tail) + e.length / instance.drone_speed +
                              drone_leg_time(instance, head, truck_at[s]);
        if (flight > fleet.tau) continue;
        const int slot = (v - 1) % (m + 1) - 1;
        own = std::max(drone_ready[static_cast<std::size_t>(s) * m + slot], truck_t[s]) + flight;
        sys = system_completion(s, truck_at[s], truck_t[s], slot, own);
      }
      double span = sys;
      for (int o = 0; o < k; ++o) {
        if (o != s) span = std::max(span, completion[o]);
      }
      if (span < best_span || (span == best_span && own < best_own)) {
        best_span = span;
        best_own = own;
        best_v = v;
        best_sys = sys;
      }
    }
    c.assign.push_back(best_v);
    const int s = fleet.system_of(best_v);
    if (fleet.is_truck(best_v)) {
      truck_t[s] = best_own;
      truck_at[s] = head;
    } else {
      drone_ready[static_cast<std::size_t>(s) * m + (best_v - 1) % (m + 1) - 1] = best_own;
    }
    completion[s] = best_sys;
  }
  return c;
}

std::vector<Individual> initial_population(const Decoder& decoder, const GaConfig& config, double w_inf) {
  const Instance& inst = decoder.instance();
  const int n_targeted = ceil_count(config.p_targeted, config.pop_min);
  std::vector<Individual> pop;
  pop.reserve(config.pop_min);
  for (int i = 0; i < config.pop_min; ++i) {
    Rng rng(derive_seed(config.seed, {0, static_cast<std::uint64_t>(i)}));
    Chromosome c = i < n_targeted
                       ? targeted_chromosome(inst, decoder.metrics(), decoder.fleet(), i == 0 ? nullptr : &rng)
                       : random_chromosome(inst.num_required(), decoder.fleet(), rng);
    pop.push_back(make_individual(std::move(c), rng(), decoder, w_inf));
  }
  assign_fitness(pop, config.elite_ratio);
  return pop;
}

std::size_t tournament_select(std::span<const Individual> population, Rng& rng) {
  const int n = static_cast<int>(population.size());
  const auto i = static_cast<std::size_t>(uniform_int(rng, 0, n - 1));
  const auto j = static_cast<std::size_t>(uniform_int(rng, 0, n - 1));
  if (population[i].fitness < population[j].fitness) return i;
  if (population[j].fitness < population[i].fitness) return j;
  return std::min(i, j);
}

void adapt_schedules(GaState& state, const GaConfig& config, bool improved, double feasible_fraction) {
  if (improved) {
    state.stagnant = 0;
    state.p_now = config.p_mutation;
  } else if (++state.stagnant >= config.stagnation_window) {
    state.p_now = config.p_mutation_boost;
  }
  if (feasible_fraction < 0.2) {
    state.w_inf *= 1.2;
  } else if (feasible_fraction > 0.8) {
    state.w_inf /= 1.2;
  }
  state.w_inf = std::clamp(state.w_inf, config.w_inf_min, config.w_inf_max);
}

void update_incumbents(GaState& state, std::span<const Individual> pool) {
  for (const Individual& ind : pool) {
    if (ind.eval.feasible) {
      if (!state.best_feasible || ind.eval.makespan < state.best_feasible->eval.makespan) {
        state.best_feasible = ind;
      }
    } else if (!state.least_violation || better_outcome(ind.eval, state.least_violation->eval)) {
      state.least_violation = ind;
    }
  }
}

GaState initial_state(const Decoder& decoder, const GaConfig& config) {
  GaState state;
  state.p_now = config.p_mutation;
  state.w_inf = config.w_inf_initial;
  state.population = initial_population(decoder, config, state.w_inf);
  state.best_cost = min_cost(state.population);
  update_incumbents(state, state.population);
  return state;
}

TraceRow generation_step(GaState& state, const Decoder& decoder, const GaConfig& config) {
  const int gen = state.generation + 1;
  const FleetConfig& fleet = decoder.fleet();
  const std::vector<Individual>& parents = state.population;

  std::vector<Individual> pool = parents;
  pool.reserve(config.pop_max);
  const std::size_t n_parents = pool.size();
  for (std::uint64_t k = 0; static_cast<int>(pool.size()) < config.pop_max; ++k) {
    Rng rng(derive_seed(config.seed, {static_cast<std::uint64_t>(gen), k}));
    const Chromosome& a = parents[tournament_select(parents, rng)].chromosome;
    const Chromosome& b = parents[tournament_select(parents, rng)].chromosome;
    std::pair<Chromosome, Chromosome> kids;
    switch (uniform_int(rng, 0, 2)) {
      case 0: {
        Chromosome c1 = crossover_ox(a, b, rng);
        kids = {std::move(c1), crossover_ox(b, a, rng)};
        break;
      }
      case 1: {
        Chromosome c1 = crossover_pmx(a, b, rng);
        kids = {std::move(c1), crossover_pmx(b, a, rng)};
        break;
      }
      default:
        kids = crossover_segment_preserving(a, b, fleet, rng);
        break;
    }
    for (Chromosome* child : {&kids.first, &kids.second}) {
      if (static_cast<int>(pool.size()) >= config.pop_max) break;
      mutate(*child, state.p_now, fleet, rng);
      const std::uint64_t decode_seed = rng();
      pool.push_back(make_individual(std::move(*child), decode_seed, decoder, state.w_inf));
    }
  }
  assign_fitness(pool, config.elite_ratio);

  std::vector<std::size_t> offspring(pool.size() - n_parents);
  std::iota(offspring.begin(), offspring.end(), n_parents);
  std::stable_sort(offspring.begin(), offspring.end(),
                   [&](std::size_t x, std::size_t y) { return pool[x].fitness < pool[y].fitness; });
  const int n_refine = ceil_count(config.refine_fraction, static_cast<int>(offspring.size()));
  for (int r = 0; r < n_refine; ++r) {
    const std::size_t idx = offspring[r];
    Rng rng(derive_seed(config.seed, {static_cast<std::uint64_t>(gen), idx, 0x15}));
    LsContext ctx{decoder, state.w_inf, config.ls, rng};
    pool[idx] = refine(pool[idx], ctx);
  }
  assign_fitness(pool, config.elite_ratio);
  update_incumbents(state, pool);

  std::vector<bool> keep(pool.size(), false);
  int kept = 0;
  const int n_elite = ceil_count(config.survivor_elite, config.pop_min);
  for (std::size_t idx : order_by(pool, [](const Individual& x) { return x.cost; })) {
    if (kept == n_elite) break;
    keep[idx] = true;
    ++kept;
  }
  const std::vector<std::size_t> by_fitness = order_by(pool, [](const Individual& x) { return x.fitness; });
  for (std::size_t idx : by_fitness) {
    if (kept == config.pop_min) break;
    if (!keep[idx]) {
      keep[idx] = true;
      ++kept;
    }
  }
  std::vector<Individual> next;
  next.reserve(config.pop_min);
  for (std::size_t idx : by_fitness) {
    if (keep[idx]) next.push_back(std::move(pool[idx]));
  }
  assign_fitness(next, config.elite_ratio);

  TraceRow row;
  row.generation = gen;
  row.p_m = state.p_now;
  row.w_inf = state.w_inf;
  row.mean_fitness = mean_fitness(next);

  const double gen_best = min_cost(next);
  const bool improved = gen_best < state.best_cost;
  if (improved) state.best_cost = gen_best;
  const auto n_feasible = std::count_if(next.begin(), next.end(), [](const Individual& x) { return x.eval.feasible; });
  state.population = std::move(next);
  const double w_before = state.w_inf;
  adapt_schedules(state, config, improved,
                  static_cast<double>(n_feasible) / static_cast<double>(state.population.size()));
  if (state.w_inf != w_before) {
    for (Individual& ind : state.population) reprice(ind, state.w_inf);
    assign_fitness(state.population, config.elite_ratio);
  }
  state.generation = gen;

  row.best_cost = state.best_cost;
  if (state.best_feasible) row.best_feasible_makespan = state.best_feasible->eval.makespan;
  return row;
}

PathPicker replay_picker(const std::vector<std::size_t>& choices) {
  return [choices, next = std::size_t{0}](std::size_t) mutable { return choices.at(next++); };
}

void for_each_choice(std::span<const std::size_t> options,
                     const std::function<void(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> choice(options.size(), 0);
  while (true) {
    visit(choice);
    std::size_t k = choice.size();
    while (k > 0) {
      --k;
      if (++choice[k] < options[k]) break;
      choice[k] = 0;
      if (k == 0) return;
    }
    if (choice.empty()) return;
  }
}

SolveResult solve(const Instance& instance, const MetricTables& metrics, const FleetConfig& fleet,
                  const GaConfig& config, const TraceCallback& on_generation) {
  fleet.validate();
  config.validate(instance.num_required());
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  const Decoder decoder(instance, metrics, fleet);

  SolveResult result;
  GaState state = initial_state(decoder, config);
  TraceRow row0;
  row0.best_cost = state.best_cost;
  if (state.best_feasible) row0.best_feasible_makespan = state.best_feasible->eval.makespan;
  row0.mean_fitness = mean_fitness(state.population);
  row0.p_m = state.p_now;
  row0.w_inf = state.w_inf;
  row0.elapsed_s = elapsed();
  result.trace.push_back(row0);
  if (on_generation) on_generation(row0);
  for (int g = 0; g < config.generations; ++g) {
    TraceRow row = generation_step(state, decoder, config);
    row.elapsed_s = elapsed();
    result.trace.push_back(row);
    if (on_generation) on_generation(row);
  }

  const Individual& incumbent = state.best_feasible ? *state.best_feasible : *state.least_violation;
  result.chromosome = incumbent.chromosome;
  result.decode_seed = incumbent.decode_seed;
  result.eval = incumbent.eval;

  // Polish: every path choice for the incumbents and the distinct final
  // members, best fitness first, while the decode budget lasts.
  std::vector<const Individual*> candidates;
  if (state.best_feasible) candidates.push_back(&*state.best_feasible);
  if (state.least_violation) candidates.push_back(&*state.least_violation);
  for (const Individual& ind : state.population) candidates.push_back(&ind);
  std::set<std::pair<std::vector<int>, std::vector<int>>> seen;
  std::size_t budget = config.polish_budget;
  for (const Individual* cand : candidates) {
    if (!seen.insert({cand->chromosome.seq, cand->chromosome.assign}).second) continue;
    const std::vector<std::size_t> options = decoder.path_options(cand->chromosome);
    std::size_t product = 1;
    for (std::size_t o : options) {
      product = product > budget / o ? budget + 1 : product * o;
      if (product > budget) break;
    }
    if (product <= 1 || product > budget) continue;
    budget -= product;
    for_each_choice(options, [&](const std::vector<std::size_t>& choice) {
      const Evaluation eval = decoder.evaluate(cand->chromosome, replay_picker(choice));
      if (better_outcome(eval, result.eval)) {
        result.eval = eval;
        result.chromosome = cand->chromosome;
        result.decode_seed = cand->decode_seed;
        result.path_choices = choice;
      }
    });
  }

  result.plan = result.path_choices.empty()
                    ? decoder.decode(result.chromosome, result.decode_seed)
                    : decoder.decode(result.chromosome, replay_picker(result.path_choices));
  result.eval = evaluate(result.plan, fleet);
  result.feasible = result.eval.feasible;
  return result;
}

SolveResult solve(const Instance& instance, const FleetConfig& fleet, const GaConfig& config) {
  const MetricTables metrics = MetricTables::build(instance);
  return solve(instance, metrics, fleet, config);
}

}  // namespace rpp
