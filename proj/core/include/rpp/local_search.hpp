#pragma once

#include <optional>

#include "rpp/individual.hpp"
#include "rpp/rng.hpp"
#include "rpp/routing.hpp"

namespace rpp {

struct LsConfig {
  int ls_steps = 30;
  int or_opt_block = 3;  // b
  double p_ruin = 0.2;
  int sortie_min_arcs = 3;
  int sortie_exhaustive_max = 6;
  int sortie_shuffles = 50;

  void validate(int n_required) const;
};

struct LsContext {
  const Decoder& decoder;
  double w_inf;
  LsConfig config;
  Rng& rng;
};

enum class LsOperator { SubseqReversal, OrOpt, SortieOpt, GreedyReassign, RuinConstruct };

// Bounded first-improvement search: each step draws one operator uniformly
// and keeps the result only when the penalized cost strictly drops. The
// decode seed is held fixed so candidates are compared under the same path
// sampling.
Individual refine(const Individual& ind, LsContext& ctx);

// Applies one operator and returns the evaluated neighbour, or nullopt when
// the operator has no applicable move. Does not enforce improvement.
std::optional<Individual> apply_operator(LsOperator op, const Individual& ind, LsContext& ctx);

// Pure chromosome moves.
Chromosome op_subseq_reversal(const Chromosome& c, Rng& rng);
Chromosome op_or_opt(const Chromosome& c, int max_block, Rng& rng);
// Moves the block [start, start + len) so that it begins at `target` in the
// sequence with the block removed.
Chromosome move_block(const Chromosome& c, int start, int len, int target);

// Re-sequences the arcs of one drone sortie with at least sortie_min_arcs
// arcs to minimize its flight between the same launch and recovery nodes.
// Returns nullopt when no sortie qualifies or no shorter order exists.
std::optional<Chromosome> op_sortie_opt(const Individual& ind, LsContext& ctx);

// Best strictly improving vehicle for one uniformly drawn task.
std::optional<Individual> op_greedy_reassign(const Individual& ind, LsContext& ctx);
std::optional<Individual> greedy_reassign_at(const Individual& ind, int position, LsContext& ctx);

// Removes ceil(p_ruin * R) random tasks and reinserts each, in removal
// order, at the position, vehicle and orientation of least penalized cost.
Individual op_ruin_construct(const Individual& ind, LsContext& ctx);

}  // namespace rpp
