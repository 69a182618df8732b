#pragma once

#include <utility>
#include <vector>

#include "rpp/chromosome.hpp"
#include "rpp/rng.hpp"

namespace rpp {

// Inclusive 0-based cut positions, first <= last.
struct CutPoints {
  int first = 0;
  int last = 0;
};

CutPoints random_cuts(int length, Rng& rng);

// Order crossover: the cut segment (signs and vehicles included) comes from
// p1, the remaining positions are filled in p2's order starting after the
// second cut, skipping task ids already present.
Chromosome crossover_ox(const Chromosome& p1, const Chromosome& p2, CutPoints cuts);
Chromosome crossover_ox(const Chromosome& p1, const Chromosome& p2, Rng& rng);

// Partially mapped crossover on absolute task ids; genes outside the segment
// come from p2, remapped through the segment correspondence when they clash.
Chromosome crossover_pmx(const Chromosome& p1, const Chromosome& p2, CutPoints cuts);
Chromosome crossover_pmx(const Chromosome& p1, const Chromosome& p2, Rng& rng);

// The genes of one truck system, in sequence order, with their positions.
struct SystemSegment {
  std::vector<int> positions;
  Chromosome genes;
};

SystemSegment extract_system_segment(const Chromosome& c, const FleetConfig& fleet, int system);

enum class SegmentOp { Ox, Pmx };

// Recombines the task subsequences of one truck system and repairs each child
// against the opposite parent. Genes of every other system keep their
// positions. Falls back to full-chromosome OX when the system is empty in
// either parent.
std::pair<Chromosome, Chromosome> crossover_segment_preserving(const Chromosome& p1,
                                                               const Chromosome& p2,
                                                               const FleetConfig& fleet, Rng& rng);
std::pair<Chromosome, Chromosome> crossover_segment_preserving(const Chromosome& p1,
                                                               const Chromosome& p2,
                                                               const FleetConfig& fleet, int system,
                                                               SegmentOp op, CutPoints cuts1,
                                                               CutPoints cuts2);

void swap_genes(Chromosome& c, int i, int j);
// Reverses positions [i, j] in both parts and flips the traversal signs.
void invert_segment(Chromosome& c, int i, int j);

enum class MutationKind { Swap, Inversion, Reassignment };

// With probability p_now applies one uniformly chosen operator among those
// that can change `c`. Returns the operator applied, if any.
std::optional<MutationKind> mutate(Chromosome& c, double p_now, const FleetConfig& fleet, Rng& rng);

}  // namespace rpp
