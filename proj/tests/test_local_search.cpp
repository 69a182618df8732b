#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rpp/evolution.hpp"
#include "rpp/genetic_ops.hpp"
#include "rpp/local_search.hpp"
#include "rpp/oracle.hpp"
#include "support.hpp"

namespace rpp {
namespace {

FleetConfig fleet(int k, int m, std::optional<int> delta = std::nullopt, double tau = 1.0) {
  FleetConfig f;
  f.trucks = k;
  f.drones_per_truck = m;
  f.delta = delta;
  f.tau = tau;
  return f;
}

Instance generated(int n, int e, int r, std::uint64_t seed) {
  GeneratorConfig cfg;
  cfg.n_nodes = n;
  cfg.n_edges = e;
  cfg.n_required = r;
  cfg.seed = seed;
  return generate_instance(cfg);
}

// Least evaluation of `c` over every co-optimal path choice, by the oracle's
// ordering.
double best_over_paths(const Decoder& dec, const Chromosome& c) {
  double best = INFINITY;
  for_each_choice(dec.path_options(c), [&](const std::vector<std::size_t>& choice) {
    const Evaluation e = dec.evaluate(c, replay_picker(choice));
    if (e.feasible) best = std::min(best, e.makespan);
  });
  return best;
}

double flight_km(const Instance& inst, NodeId launch, NodeId recover, const std::vector<int>& tasks) {
  double km = 0.0;
  NodeId at = launch;
  for (int t : tasks) {
    const Edge& e = inst.task_edge(std::abs(t));
    km += inst.euclidean(at, t > 0 ? e.u : e.v) + e.length;
    at = t > 0 ? e.v : e.u;
  }
  return km + inst.euclidean(at, recover);
}

TEST(Moves, SubseqReversalTwiceOverEverythingIsIdentity) {
  Chromosome c{{1, -2, 3}, {1, 2, 1}};
  Chromosome once = c;
  invert_segment(once, 0, 2);
  EXPECT_EQ(once, (Chromosome{{-3, 2, -1}, {1, 2, 1}}));
  invert_segment(once, 0, 2);
  EXPECT_EQ(once, c);
}

TEST(Moves, MoveBlock) {
  const Chromosome c{{1, 2, 3, 4, 5}, {1, 2, 3, 4, 5}};
  EXPECT_EQ(move_block(c, 1, 2, 0), (Chromosome{{2, 3, 1, 4, 5}, {2, 3, 1, 4, 5}}));
  EXPECT_EQ(move_block(c, 0, 2, 3), (Chromosome{{3, 4, 5, 1, 2}, {3, 4, 5, 1, 2}}));
  EXPECT_EQ(move_block(c, 2, 2, 2), c) << "relocating a block onto itself";
}

TEST(Moves, OrOptWithFullBlockIsIdentity) {
  Rng rng(1);
  const Chromosome c{{1, 2, 3}, {1, 1, 1}};
  for (int i = 0; i < 20; ++i) {
    const Chromosome out = op_or_opt(c, 3, rng);
    EXPECT_TRUE(test::valid_chromosome(out, 3, 1));
  }
  const Chromosome one{{-1}, {1}};
  EXPECT_EQ(op_or_opt(one, 1, rng), one);
}

TEST(Moves, OrOptMovesAContiguousBlock) {
  Rng rng(2);
  const Chromosome c{{1, 2, 3, 4, 5, 6, 7}, {1, 1, 1, 1, 1, 1, 1}};
  for (int i = 0; i < 500; ++i) {
    const Chromosome out = op_or_opt(c, 3, rng);
    EXPECT_NE(out, c);
    // Removing some block of length <= 3 from both leaves the same residue.
    bool found = false;
    for (int len = 1; len <= 3 && !found; ++len) {
      for (int start = 0; start + len <= 7 && !found; ++start) {
        for (int target = 0; target + len <= 7 && !found; ++target) {
          found = move_block(c, start, len, target) == out;
        }
      }
    }
    EXPECT_TRUE(found) << to_string(out);
  }
}

class LsOperatorValidity : public ::testing::TestWithParam<int> {};

TEST_P(LsOperatorValidity, ChromosomesStayValid) {
  const int op = GetParam();
  const FleetConfig f = fleet(2, 2, 3, 0.15);
  const std::vector<Instance> instances{generated(20, 40, 6, 1), generated(30, 60, 9, 2)};
  std::vector<MetricTables> tables;
  for (const Instance& inst : instances) tables.push_back(MetricTables::build(inst));
  // Pure moves get the full 10^5 trials; evaluated operators fewer, since
  // each application decodes many neighbours.
  const int trials = op < 2 ? 100000 : op == 4 ? 2000 : 10000;
  Rng rng(31 + op);
  int failures = 0;
  for (int trial = 0; trial < trials && failures < 5; ++trial) {
    const std::size_t which = static_cast<std::size_t>(trial) % instances.size();
    const Instance& inst = instances[which];
    const int r = inst.num_required();
    const Chromosome c = random_chromosome(r, f, rng);
    std::optional<Chromosome> out;
    if (op == 0) {
      out = op_subseq_reversal(c, rng);
    } else if (op == 1) {
      out = op_or_opt(c, 3, rng);
    } else {
      const Decoder dec(inst, tables[which], f);
      LsContext ctx{dec, 2.0, LsConfig{}, rng};
      const Individual ind = make_individual(c, rng(), dec, 2.0);
      std::optional<Individual> res = apply_operator(static_cast<LsOperator>(op), ind, ctx);
      if (res) {
        out = res->chromosome;
        const Individual fresh = make_individual(res->chromosome, res->decode_seed, dec, 2.0);
        EXPECT_EQ(res->eval, fresh.eval) << "cached scores must match a fresh decode";
        EXPECT_EQ(res->cost, fresh.cost);
        EXPECT_TRUE(test::covers_all(dec.decode(res->chromosome, res->decode_seed), r));
        if (op == 3) {
          int changed = 0;
          for (int p = 0; p < r; ++p) changed += res->chromosome.assign[p] != c.assign[p];
          EXPECT_EQ(changed, 1);
          EXPECT_EQ(res->chromosome.seq, c.seq);
          EXPECT_LT(res->cost, ind.cost);
        }
      }
    }
    if (out && !test::valid_chromosome(*out, r, f.num_vehicles())) {
      ++failures;
      ADD_FAILURE() << "invalid " << to_string(*out);
    }
  }
  EXPECT_EQ(failures, 0);
}

std::string operator_name(const ::testing::TestParamInfo<int>& info) {
  static const char* names[] = {"SubseqReversal", "OrOpt", "SortieOpt", "GreedyReassign", "RuinConstruct"};
  return names[info.param];
}

INSTANTIATE_TEST_SUITE_P(Operators, LsOperatorValidity, ::testing::Range(0, 5), operator_name);

TEST(SortieOpt, MatchesTheFortyEightOptionOracle) {
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Instance inst = generated(25, 50, 7, seed);
    const MetricTables m = MetricTables::build(inst);
    const FleetConfig f = fleet(1, 1, std::nullopt, 100.0);
    const Decoder dec(inst, m, f);
    Rng rng(seed);
    Chromosome c = random_chromosome(7, f, rng);
    c.assign = {1, 2, 2, 2, 1, 1, 1};
    const Individual ind = make_individual(c, seed, dec, 1.0);
    const RoutePlan plan = dec.decode(c, seed);
    ASSERT_EQ(plan.sorties.size(), 1u);
    const Sortie& s = plan.sorties[0];
    ASSERT_EQ(s.tasks.size(), 3u);

    // Hand oracle: 3! orders times 2^3 orientations.
    std::vector<int> ids{std::abs(s.tasks[0]), std::abs(s.tasks[1]), std::abs(s.tasks[2])};
    std::sort(ids.begin(), ids.end());
    double best = INFINITY;
    int options = 0;
    do {
      for (int mask = 0; mask < 8; ++mask) {
        std::vector<int> tasks(3);
        for (int k = 0; k < 3; ++k) tasks[k] = (mask >> k & 1) ? -ids[k] : ids[k];
        best = std::min(best, flight_km(inst, s.launch_node, s.recovery_node, tasks));
        ++options;
      }
    } while (std::next_permutation(ids.begin(), ids.end()));
    ASSERT_EQ(options, 48);

    LsContext ctx{dec, 1.0, LsConfig{}, rng};
    const std::optional<Chromosome> out = op_sortie_opt(ind, ctx);
    const double current = flight_km(inst, s.launch_node, s.recovery_node, s.tasks);
    if (!out) {
      EXPECT_NEAR(current, best, 1e-12) << "no move means the sortie is already optimal";
      continue;
    }
    ++checked;
    ASSERT_TRUE(test::valid_chromosome(*out, 7, 2));
    EXPECT_EQ(out->assign, c.assign);
    EXPECT_EQ(std::vector<int>(out->seq.begin() + 4, out->seq.end()), std::vector<int>(c.seq.begin() + 4, c.seq.end()));
    const std::vector<int> tasks(out->seq.begin() + 1, out->seq.begin() + 4);
    EXPECT_NEAR(flight_km(inst, s.launch_node, s.recovery_node, tasks), best, 1e-12);
    EXPECT_LT(best, current);
  }
  EXPECT_GT(checked, 5);
}

TEST(SortieOpt, ShortSortiesAreLeftAlone) {
  const Instance inst = test::triangle();
  const MetricTables m = MetricTables::build(inst);
  const Decoder dec(inst, m, fleet(1, 1));
  Rng rng(1);
  LsContext ctx{dec, 1.0, LsConfig{}, rng};
  EXPECT_FALSE(op_sortie_opt(make_individual(Chromosome{{1}, {2}}, 0, dec, 1.0), ctx).has_value());
}

TEST(GreedyReassign, MovesTaskOffAViolatingDrone) {
  const Instance inst = test::triangle();
  const MetricTables m = MetricTables::build(inst);
  const Decoder dec(inst, m, fleet(1, 1, std::nullopt, 0.05));
  Rng rng(1);
  LsContext ctx{dec, 10.0, LsConfig{}, rng};
  const Individual ind = make_individual(Chromosome{{1}, {2}}, 0, dec, 10.0);
  EXPECT_FALSE(ind.eval.feasible);
  const auto out = greedy_reassign_at(ind, 0, ctx);
  ASSERT_TRUE(out.has_value());
  EXPECT_EQ(out->chromosome.assign[0], 1);
  EXPECT_TRUE(out->eval.feasible);
  EXPECT_NEAR(out->cost * 60.0, 21.0, 1e-9);
}

TEST(GreedyReassign, SingleVehicleHasNoAlternative) {
  const Instance inst = test::triangle();
  const MetricTables m = MetricTables::build(inst);
  const Decoder dec(inst, m, fleet(1, 0));
  Rng rng(1);
  LsContext ctx{dec, 1.0, LsConfig{}, rng};
  EXPECT_FALSE(op_greedy_reassign(make_individual(Chromosome{{1}, {1}}, 0, dec, 1.0), ctx).has_value());
}

TEST(RuinConstruct, TinyShareStillRemovesOneTask) {
  const Instance inst = test::triangle();
  const MetricTables m = MetricTables::build(inst);
  const Decoder dec(inst, m, fleet(1, 1, std::nullopt, 0.05));
  Rng rng(1);
  LsConfig cfg;
  cfg.p_ruin = 0.01;  // 0.01 * R rounds up to one removal
  LsContext ctx{dec, 10.0, cfg, rng};
  // The lone task sits on a violating drone; reinsertion must move it.
  const Individual out = op_ruin_construct(make_individual(Chromosome{{1}, {2}}, 0, dec, 10.0), ctx);
  EXPECT_EQ(out.chromosome.assign[0], 1);
  EXPECT_TRUE(out.eval.feasible);
}

TEST(Refine, NeverIncreasesCostAndKeepsSeed) {
  const Instance inst = generated(40, 80, 15, 4);
  const MetricTables m = MetricTables::build(inst);
  const FleetConfig f = fleet(2, 2, 4, 0.1);
  const Decoder dec(inst, m, f);
  Rng rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    const Individual start = make_individual(random_chromosome(15, f, rng), rng(), dec, 3.0);
    LsContext ctx{dec, 3.0, LsConfig{}, rng};
    const Individual out = refine(start, ctx);
    EXPECT_LE(out.cost, start.cost);
    EXPECT_EQ(out.decode_seed, start.decode_seed);
    EXPECT_EQ(out.eval, dec.evaluate(out.chromosome, out.decode_seed));
    EXPECT_EQ(out.cost, penalized_cost(out.eval, 3.0));
  }
}

TEST(Refine, TrajectoryIsMonotone) {
  const Instance inst = generated(30, 60, 10, 6);
  const MetricTables m = MetricTables::build(inst);
  const FleetConfig f = fleet(1, 2, 3, 0.2);
  const Decoder dec(inst, m, f);
  Rng rng(12);
  LsConfig one_step;
  one_step.ls_steps = 1;
  Individual cur = make_individual(random_chromosome(10, f, rng), 5, dec, 1.0);
  for (int step = 0; step < 200; ++step) {
    LsContext ctx{dec, 1.0, one_step, rng};
    const Individual next = refine(cur, ctx);
    EXPECT_LE(next.cost, cur.cost);
    if (next.cost == cur.cost) EXPECT_EQ(next.chromosome, cur.chromosome);
    cur = next;
  }
}

TEST(Refine, LocalOptimumIsReturnedUnchanged) {
  const Instance inst = test::triangle();
  const MetricTables m = MetricTables::build(inst);
  const Decoder dec(inst, m, fleet(1, 1));
  Rng rng(3);
  LsContext ctx{dec, 1.0, LsConfig{}, rng};
  const Individual opt = make_individual(Chromosome{{1}, {2}}, 0, dec, 1.0);
  EXPECT_EQ(refine(opt, ctx).chromosome, opt.chromosome);
}

TEST(Refine, ReachesTheOracleOptimumFromRandomStarts) {
  const FleetConfig f = fleet(1, 1, std::nullopt, 0.3);
  int hits = 0;
  int trials = 0;
  for (std::uint64_t inst_seed = 1; inst_seed <= 5; ++inst_seed) {
    const Instance inst = generated(15, 30, 4, inst_seed);
    const MetricTables m = MetricTables::build(inst);
    const Decoder dec(inst, m, f);
    const OracleResult opt = exhaustive_solve(inst, m, f);
    ASSERT_TRUE(opt.feasible);
    for (int t = 0; t < 20; ++t) {
      Rng rng(derive_seed(inst_seed, {static_cast<std::uint64_t>(t)}));
      // The oracle ranks feasible plans only, so infeasibility must never pay off.
      const Individual start = make_individual(random_chromosome(4, f, rng), rng(), dec, 100.0);
      LsContext ctx{dec, 100.0, LsConfig{}, rng};
      const Individual out = refine(start, ctx);
      const double reached = best_over_paths(dec, out.chromosome);
      EXPECT_GE(reached, opt.eval.makespan - 1e-12) << "oracle is a lower bound";
      hits += reached <= opt.eval.makespan + 1e-12;
      ++trials;
    }
  }
  EXPECT_EQ(trials, 100);
  EXPECT_GE(hits, 50) << hits << " of 100 refined random starts reached the optimum";
}

TEST(RuinConstruct, NeverWorsensTheKeptOptimum) {
  const FleetConfig f = fleet(1, 1, std::nullopt, 0.3);
  for (std::uint64_t inst_seed = 1; inst_seed <= 3; ++inst_seed) {
    const Instance inst = generated(15, 30, 4, inst_seed);
    const MetricTables m = MetricTables::build(inst);
    const Decoder dec(inst, m, f);
    const OracleResult opt = exhaustive_solve(inst, m, f);
    const Individual start = make_individual(opt.chromosome, inst_seed, dec, 1.0);
    Individual kept = start;
    Rng rng(inst_seed);
    LsContext ctx{dec, 1.0, LsConfig{}, rng};
    for (int i = 0; i < 100; ++i) {
      const Individual cand = op_ruin_construct(kept, ctx);
      ASSERT_TRUE(test::valid_chromosome(cand.chromosome, 4, 2));
      if (cand.cost < kept.cost) kept = cand;
      ASSERT_LE(kept.cost, start.cost);
      if (kept.eval.feasible) EXPECT_GE(kept.eval.makespan, opt.eval.makespan - 1e-12);
    }
  }
}

TEST(LsConfig, Validation) {
  LsConfig c;
  EXPECT_NO_THROW(c.validate(5));
  c.ls_steps = 0;
  EXPECT_THROW(c.validate(5), std::invalid_argument);
  c = LsConfig{};
  c.or_opt_block = 6;
  EXPECT_THROW(c.validate(5), std::invalid_argument);
  c = LsConfig{};
  c.p_ruin = 1.0;
  EXPECT_THROW(c.validate(5), std::invalid_argument);
}

}  // namespace
}  // namespace rpp
