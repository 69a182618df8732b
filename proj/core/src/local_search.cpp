#include "rpp/local_search.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "rpp/genetic_ops.hpp"

namespace rpp {

Individual make_individual(Chromosome c, std::uint64_t decode_seed, const Decoder& decoder,
                           double w_inf) {
  Individual ind;
  ind.chromosome = std::move(c);
  ind.decode_seed = decode_seed;
  ind.systems.reserve(decoder.fleet().trucks);
  for (int s = 0; s < decoder.fleet().trucks; ++s) {
    ind.systems.push_back(
        decoder.score_system(ind.chromosome.seq, ind.chromosome.assign, s, decode_seed));
  }
  ind.eval = combine(ind.systems, decoder.fleet());
  ind.cost = penalized_cost(ind.eval, w_inf);
  return ind;
}

void reprice(Individual& ind, double w_inf) { ind.cost = penalized_cost(ind.eval, w_inf); }

void LsConfig::validate(int n_required) const {
  if (ls_steps < 1) throw std::invalid_argument("ls_steps must be at least 1");
  if (or_opt_block < 1 || or_opt_block > std::max(1, n_required)) {
    throw std::invalid_argument("or-opt block bound must lie in [1, R]");
  }
  if (!(p_ruin > 0.0 && p_ruin < 1.0)) throw std::invalid_argument("p_ruin must lie in (0, 1)");
}

namespace {

bool same_system_genes(const Chromosome& a, const Chromosome& b, const FleetConfig& fleet, int s) {
  int i = 0;
  int j = 0;
  const int n = a.size();
  const int m = b.size();
  while (true) {
    while (i < n && fleet.system_of(a.assign[i]) != s) ++i;
    while (j < m && fleet.system_of(b.assign[j]) != s) ++j;
    if (i == n || j == m) return i == n && j == m;
    if (a.seq[i] != b.seq[j] || a.assign[i] != b.assign[j]) return false;
    ++i;
    ++j;
  }
}

// Evaluates `c` reusing the cached scores of systems whose genes are unchanged.
Individual rescore(const Individual& base, Chromosome c, const Decoder& decoder, double w_inf) {
  Individual ind;
  ind.decode_seed = base.decode_seed;
  ind.systems = base.systems;
  for (int s = 0; s < decoder.fleet().trucks; ++s) {
    if (!same_system_genes(base.chromosome, c, decoder.fleet(), s)) {
      ind.systems[s] = decoder.score_system(c.seq, c.assign, s, base.decode_seed);
    }
  }
  ind.chromosome = std::move(c);
  ind.eval = combine(ind.systems, decoder.fleet());
  ind.cost = penalized_cost(ind.eval, w_inf);
  return ind;
}

struct Arc {
  int task;  // positive id
  NodeId u, v;
  double len;
};

// Shortest flight launch -> arcs in `order` -> recovery with each arc's
// orientation chosen by dynamic programming. Returns km and writes the signed
// tasks.
double best_orientation(const Instance& inst, NodeId launch, NodeId recover,
                        const std::vector<Arc>& arcs, const std::vector<int>& order,
                        std::vector<int>* signed_out) {
  const int n = static_cast<int>(order.size());
  // cost[k][o]: best km ending at the head of arc order[k] flown with orientation o.
  std::vector<std::array<double, 2>> cost(n);
  std::vector<std::array<int, 2>> from(n);
  auto head = [&](int k, int o) { return o == 0 ? arcs[order[k]].v : arcs[order[k]].u; };
  auto tail = [&](int k, int o) { return o == 0 ? arcs[order[k]].u : arcs[order[k]].v; };
  for (int o = 0; o < 2; ++o) cost[0][o] = inst.euclidean(launch, tail(0, o)) + arcs[order[0]].len;
  for (int k = 1; k < n; ++k) {
    for (int o = 0; o < 2; ++o) {
      cost[k][o] = std::numeric_limits<double>::infinity();
      for (int po = 0; po < 2; ++po) {
        const double c = cost[k - 1][po] + inst.euclidean(head(k - 1, po), tail(k, o)) + arcs[order[k]].len;
        if (c < cost[k][o]) {
          cost[k][o] = c;
          from[k][o] = po;
        }
      }
    }
  }
  int o_last = 0;
  double best = std::numeric_limits<double>::infinity();
  for (int o = 0; o < 2; ++o) {
    const double c = cost[n - 1][o] + inst.euclidean(head(n - 1, o), recover);
    if (c < best) {
      best = c;
      o_last = o;
    }
  }
  if (signed_out != nullptr) {
    signed_out->assign(n, 0);
    for (int k = n - 1, o = o_last; k >= 0; --k) {
      (*signed_out)[k] = o == 0 ? arcs[order[k]].task : -arcs[order[k]].task;
      if (k > 0) o = from[k][o];
    }
  }
  return best;
}

double flight_km(const Instance& inst, NodeId launch, NodeId recover, const std::vector<int>& tasks) {
  double km = 0.0;
  NodeId at = launch;
  for (int t : tasks) {
    const Edge& e = inst.task_edge(std::abs(t));
    const NodeId a = t > 0 ? e.u : e.v;
    const NodeId b = t > 0 ? e.v : e.u;
    km += inst.euclidean(at, a) + e.length;
    at = b;
  }
  return km + inst.euclidean(at, recover);
}

}  // namespace

Chromosome op_subseq_reversal(const Chromosome& c, Rng& rng) {
  Chromosome out = c;
  if (c.size() < 2) return out;
  const int i = uniform_int(rng, 0, c.size() - 1);
  int j = uniform_int(rng, 0, c.size() - 2);
  if (j >= i) ++j;
  invert_segment(out, std::min(i, j), std::max(i, j));
  return out;
}

Chromosome move_block(const Chromosome& c, int start, int len, int target) {
  Chromosome rest;
  Chromosome block;
  for (int p = 0; p < c.size(); ++p) {
    Chromosome& dst = (p >= start && p < start + len) ? block : rest;
    dst.seq.push_back(c.seq[p]);
    dst.assign.push_back(c.assign[p]);
  }
  rest.seq.insert(rest.seq.begin() + target, block.seq.begin(), block.seq.end());
  rest.assign.insert(rest.assign.begin() + target, block.assign.begin(), block.assign.end());
  return rest;
}

Chromosome op_or_opt(const Chromosome& c, int max_block, Rng& rng) {
  const int n = c.size();
  if (n < 2) return c;
  const int len = uniform_int(rng, 1, std::min(max_block, n));
  if (len == n) return c;
  const int start = uniform_int(rng, 0, n - len);
  int target = uniform_int(rng, 0, n - len - 1);
  if (target >= start) ++target;
  return move_block(c, start, len, target);
}

std::optional<Chromosome> op_sortie_opt(const Individual& ind, LsContext& ctx) {
  const Instance& inst = ctx.decoder.instance();
  const RoutePlan plan = ctx.decoder.decode(ind.chromosome, ind.decode_seed);
  std::vector<const Sortie*> eligible;
  for (const Sortie& s : plan.sorties) {
    if (static_cast<int>(s.tasks.size()) >= ctx.config.sortie_min_arcs) eligible.push_back(&s);
  }
  if (eligible.empty()) return std::nullopt;
  const Sortie& sortie = *eligible[uniform_int(ctx.rng, 0, static_cast<int>(eligible.size()) - 1)];

  std::vector<Arc> arcs;
  for (int t : sortie.tasks) {
    const Edge& e = inst.task_edge(std::abs(t));
    arcs.push_back(Arc{std::abs(t), e.u, e.v, e.length});
  }
  const int n = static_cast<int>(arcs.size());
  const double current = flight_km(inst, sortie.launch_node, sortie.recovery_node, sortie.tasks);
  double best = current;
  std::vector<int> best_tasks;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<int> trial;
  auto consider = [&]() {
    const double km = best_orientation(inst, sortie.launch_node, sortie.recovery_node, arcs, order, &trial);
    // Rescore with the same arithmetic as `current` so rounding noise never counts as a gain.
    if (km < best && flight_km(inst, sortie.launch_node, sortie.recovery_node, trial) < current) {
      best = km;
      best_tasks = trial;
    }
  };
  if (n <= ctx.config.sortie_exhaustive_max) {
    do {
      consider();
    } while (std::next_permutation(order.begin(), order.end()));
  } else {
    for (int k = 0; k < ctx.config.sortie_shuffles; ++k) {
      std::shuffle(order.begin(), order.end(), ctx.rng);
      consider();
    }
  }
  if (best_tasks.empty()) return std::nullopt;

  Chromosome out = ind.chromosome;
  std::vector<int> positions;
  for (int p = 0; p < out.size(); ++p) {
    if (out.assign[p] != sortie.drone) continue;
    const int id = std::abs(out.seq[p]);
    if (std::any_of(sortie.tasks.begin(), sortie.tasks.end(), [&](int t) { return std::abs(t) == id; })) {
      positions.push_back(p);
    }
  }
  for (std::size_t k = 0; k < positions.size(); ++k) out.seq[positions[k]] = best_tasks[k];
  return out;
}

std::optional<Individual> greedy_reassign_at(const Individual& ind, int position, LsContext& ctx) {
  const FleetConfig& fleet = ctx.decoder.fleet();
  const int current = ind.chromosome.assign[position];
  std::optional<Individual> best;
  for (int v = 1; v <= fleet.num_vehicles(); ++v) {
    if (v == current) continue;
    Chromosome c = ind.chromosome;
    c.assign[position] = v;
    Individual cand = rescore(ind, std::move(c), ctx.decoder, ctx.w_inf);
    if (cand.cost < (best ? best->cost : ind.cost)) best = std::move(cand);
  }
  return best;
}

std::optional<Individual> op_greedy_reassign(const Individual& ind, LsContext& ctx) {
  if (ctx.decoder.fleet().num_vehicles() < 2 || ind.chromosome.size() == 0) return std::nullopt;
  const int p = uniform_int(ctx.rng, 0, ind.chromosome.size() - 1);
  return greedy_reassign_at(ind, p, ctx);
}

Individual op_ruin_construct(const Individual& ind, LsContext& ctx) {
  const FleetConfig& fleet = ctx.decoder.fleet();
  const int n = ind.chromosome.size();
  const int k = std::clamp(static_cast<int>(std::ceil(ctx.config.p_ruin * n)), 1, n);

  std::vector<int> picks(n);
  std::iota(picks.begin(), picks.end(), 0);
  std::shuffle(picks.begin(), picks.end(), ctx.rng);
  picks.resize(k);

  std::vector<int> removed;
  std::vector<bool> drop(n, false);
  for (int p : picks) {
    drop[p] = true;
    removed.push_back(std::abs(ind.chromosome.seq[p]));
  }
  Chromosome partial;
  for (int p = 0; p < n; ++p) {
    if (drop[p]) continue;
    partial.seq.push_back(ind.chromosome.seq[p]);
    partial.assign.push_back(ind.chromosome.assign[p]);
  }
  std::vector<SystemScore> scores;
  for (int s = 0; s < fleet.trucks; ++s) {
    scores.push_back(ctx.decoder.score_system(partial.seq, partial.assign, s, ind.decode_seed));
  }

  for (int task : removed) {
    double best_cost = std::numeric_limits<double>::infinity();
    Chromosome best_c;
    SystemScore best_score;
    int best_system = -1;
    for (int s = 0; s < fleet.trucks; ++s) {
      // Insertion slots that matter to system s: before each of its genes, or at the end.
      std::vector<int> slots;
      for (int p = 0; p < partial.size(); ++p) {
        if (fleet.system_of(partial.assign[p]) == s) slots.push_back(p);
      }
      slots.push_back(partial.size());
      const SystemScore saved = scores[s];
      for (int slot : slots) {
        for (int j = 0; j <= fleet.drones_per_truck; ++j) {
          const int vehicle = fleet.truck_vehicle(s) + j;
          for (int sign : {1, -1}) {
            Chromosome c = partial;
            c.seq.insert(c.seq.begin() + slot, sign * task);
            c.assign.insert(c.assign.begin() + slot, vehicle);
            scores[s] = ctx.decoder.score_system(c.seq, c.assign, s, ind.decode_seed);
            const double cost = penalized_cost(combine(scores, fleet), ctx.w_inf);
            if (cost < best_cost) {
              best_cost = cost;
              best_c = std::move(c);
              best_score = scores[s];
              best_system = s;
            }
          }
        }
      }
      scores[s] = saved;
    }
    partial = std::move(best_c);
    scores[best_system] = std::move(best_score);
  }

  Individual out;
  out.chromosome = std::move(partial);
  out.decode_seed = ind.decode_seed;
  out.systems = std::move(scores);
  out.eval = combine(out.systems, fleet);
  out.cost = penalized_cost(out.eval, ctx.w_inf);
  return out;
}

std::optional<Individual> apply_operator(LsOperator op, const Individual& ind, LsContext& ctx) {
  switch (op) {
    case LsOperator::SubseqReversal:
      if (ind.chromosome.size() < 2) return std::nullopt;
      return rescore(ind, op_subseq_reversal(ind.chromosome, ctx.rng), ctx.decoder, ctx.w_inf);
    case LsOperator::OrOpt: {
      Chromosome c = op_or_opt(ind.chromosome, ctx.config.or_opt_block, ctx.rng);
      if (c == ind.chromosome) return std::nullopt;
      return rescore(ind, std::move(c), ctx.decoder, ctx.w_inf);
    }
    case LsOperator::SortieOpt: {
      auto c = op_sortie_opt(ind, ctx);
      if (!c) return std::nullopt;
      return rescore(ind, std::move(*c), ctx.decoder, ctx.w_inf);
    }
    case LsOperator::GreedyReassign:
      return op_greedy_reassign(ind, ctx);
    case LsOperator::RuinConstruct:
      return op_ruin_construct(ind, ctx);
  }
  return std::nullopt;
}

Individual refine(const Individual& ind, LsContext& ctx) {
  Individual cur = ind;
  reprice(cur, ctx.w_inf);
  for (int step = 0; step < ctx.config.ls_steps; ++step) {
    const auto op = static_cast<LsOperator>(uniform_int(ctx.rng, 0, 4));
    auto cand = apply_operator(op, cur, ctx);
    if (cand && cand->cost < cur.cost) {
      cand->div = cur.div;
      cand->fitness = cur.fitness;
      cur = std::move(*cand);
    }
  }
  return cur;
}

}  // namespace rpp
