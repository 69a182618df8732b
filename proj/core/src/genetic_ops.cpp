#include "rpp/genetic_ops.hpp"

#include <algorithm>
#include <cstdlib>
#include <unordered_map>
#include <unordered_set>

namespace rpp {
namespace {

// OX over gene lists that may differ in length and id set (system
// segments). The child has a's length; if b runs out of fresh ids the
// remaining slots take a's unused genes.
Chromosome ox_genes(const Chromosome& a, const Chromosome& b, CutPoints cuts) {
  const int n = a.size();
  Chromosome child{std::vector<int>(n, 0), std::vector<int>(n, 0)};
  std::unordered_set<int> used;
  for (int k = cuts.first; k <= cuts.last; ++k) {
    child.seq[k] = a.seq[k];
    child.assign[k] = a.assign[k];
    used.insert(std::abs(a.seq[k]));
  }
  std::vector<int> slots;
  for (int k = cuts.last + 1; k < n; ++k) slots.push_back(k);
  for (int k = 0; k < cuts.first; ++k) slots.push_back(k);

  std::size_t next_slot = 0;
  auto take_from = [&](const Chromosome& donor, int start) {
    const int m = donor.size();
    for (int step = 0; step < m && next_slot < slots.size(); ++step) {
      const int k = (start + step) % m;
      const int id = std::abs(donor.seq[k]);
      if (used.count(id)) continue;
      used.insert(id);
      child.seq[slots[next_slot]] = donor.seq[k];
      child.assign[slots[next_slot]] = donor.assign[k];
      ++next_slot;
    }
  };
  if (b.size() > 0) take_from(b, (cuts.last + 1) % b.size());
  if (next_slot < slots.size()) take_from(a, (cuts.last + 1) % n);
  return child;
}

Chromosome pmx_genes(const Chromosome& a, const Chromosome& b, CutPoints cuts) {
  const int n = a.size();
  Chromosome base = a;
  for (int k = 0; k < std::min(n, b.size()); ++k) {
    base.seq[k] = b.seq[k];
    base.assign[k] = b.assign[k];
  }
  Chromosome child = base;
  std::unordered_map<int, int> seg_pos;  // |id| -> position within a's segment
  for (int k = cuts.first; k <= cuts.last; ++k) {
    child.seq[k] = a.seq[k];
    child.assign[k] = a.assign[k];
    seg_pos[std::abs(a.seq[k])] = k;
  }
  for (int k = 0; k < n; ++k) {
    if (k >= cuts.first && k <= cuts.last) continue;
    int src = k;
    for (int guard = 0; guard <= n; ++guard) {
      auto it = seg_pos.find(std::abs(base.seq[src]));
      if (it == seg_pos.end()) break;
      src = it->second;
    }
    child.seq[k] = base.seq[src];
    child.assign[k] = base.assign[src];
  }
  return child;
}

// Replaces duplicated or foreign ids at `free_positions` with the ids that
// are missing, taking them in the donor's order with the donor's sign. The
// vehicle comes from the donor when it belongs to `system`, otherwise the
// slot keeps its own vehicle.
void repair(Chromosome& c, const std::vector<int>& free_positions, const Chromosome& donor,
            const FleetConfig& fleet, int system) {
  const int n = c.size();
  std::vector<int> count(n + 1, 0);
  std::vector<bool> is_free(n, false);
  for (int p : free_positions) is_free[p] = true;
  for (int p = 0; p < n; ++p) {
    if (!is_free[p]) ++count[std::abs(c.seq[p])];
  }
  std::vector<int> bad;
  for (int p : free_positions) {
    const int id = std::abs(c.seq[p]);
    if (count[id] > 0) {
      bad.push_back(p);
    } else {
      ++count[id];
    }
  }
  if (bad.empty()) return;
  std::size_t next = 0;
  for (int k = 0; k < donor.size() && next < bad.size(); ++k) {
    const int id = std::abs(donor.seq[k]);
    if (count[id] > 0) continue;
    ++count[id];
    const int p = bad[next++];
    c.seq[p] = donor.seq[k];
    if (fleet.system_of(donor.assign[k]) == system) c.assign[p] = donor.assign[k];
  }
}

}  // namespace

CutPoints random_cuts(int length, Rng& rng) {
  int a = uniform_int(rng, 0, length - 1);
  int b = uniform_int(rng, 0, length - 1);
  if (a > b) std::swap(a, b);
  return {a, b};
}

Chromosome crossover_ox(const Chromosome& p1, const Chromosome& p2, CutPoints cuts) {
  return ox_genes(p1, p2, cuts);
}

Chromosome crossover_ox(const Chromosome& p1, const Chromosome& p2, Rng& rng) {
  return ox_genes(p1, p2, random_cuts(p1.size(), rng));
}

Chromosome crossover_pmx(const Chromosome& p1, const Chromosome& p2, CutPoints cuts) {
  return pmx_genes(p1, p2, cuts);
}

Chromosome crossover_pmx(const Chromosome& p1, const Chromosome& p2, Rng& rng) {
  return pmx_genes(p1, p2, random_cuts(p1.size(), rng));
}

SystemSegment extract_system_segment(const Chromosome& c, const FleetConfig& fleet, int system) {
  SystemSegment seg;
  for (int p = 0; p < c.size(); ++p) {
    if (fleet.system_of(c.assign[p]) == system) {
      seg.positions.push_back(p);
      seg.genes.seq.push_back(c.seq[p]);
      seg.genes.assign.push_back(c.assign[p]);
    }
  }
  return seg;
}

std::pair<Chromosome, Chromosome> crossover_segment_preserving(const Chromosome& p1,
                                                               const Chromosome& p2,
                                                               const FleetConfig& fleet, int system,
                                                               SegmentOp op, CutPoints cuts1,
                                                               CutPoints cuts2) {
  const SystemSegment s1 = extract_system_segment(p1, fleet, system);
  const SystemSegment s2 = extract_system_segment(p2, fleet, system);
  auto recombine = [&](const Chromosome& a, const Chromosome& b, CutPoints cuts) {
    return op == SegmentOp::Ox ? ox_genes(a, b, cuts) : pmx_genes(a, b, cuts);
  };
  auto build = [&](const Chromosome& parent, const SystemSegment& own, const Chromosome& child_seg,
                   const Chromosome& donor) {
    Chromosome child = parent;
    for (std::size_t k = 0; k < own.positions.size(); ++k) {
      child.seq[own.positions[k]] = child_seg.seq[k];
      child.assign[own.positions[k]] = child_seg.assign[k];
    }
    repair(child, own.positions, donor, fleet, system);
    return child;
  };
  Chromosome c1 = build(p1, s1, recombine(s1.genes, s2.genes, cuts1), p2);
  Chromosome c2 = build(p2, s2, recombine(s2.genes, s1.genes, cuts2), p1);
  return {std::move(c1), std::move(c2)};
}

std::pair<Chromosome, Chromosome> crossover_segment_preserving(const Chromosome& p1,
                                                               const Chromosome& p2,
                                                               const FleetConfig& fleet, Rng& rng) {
  const int system = uniform_int(rng, 0, fleet.trucks - 1);
  const SystemSegment s1 = extract_system_segment(p1, fleet, system);
  const SystemSegment s2 = extract_system_segment(p2, fleet, system);
  if (s1.positions.empty() || s2.positions.empty()) {
    Chromosome a = crossover_ox(p1, p2, rng);
    Chromosome b = crossover_ox(p2, p1, rng);
    return {std::move(a), std::move(b)};
  }
  const SegmentOp op = coin(rng) ? SegmentOp::Ox : SegmentOp::Pmx;
  const CutPoints c1 = random_cuts(static_cast<int>(s1.positions.size()), rng);
  const CutPoints c2 = random_cuts(static_cast<int>(s2.positions.size()), rng);
  return crossover_segment_preserving(p1, p2, fleet, system, op, c1, c2);
}

void swap_genes(Chromosome& c, int i, int j) {
  std::swap(c.seq[i], c.seq[j]);
  std::swap(c.assign[i], c.assign[j]);
}

void invert_segment(Chromosome& c, int i, int j) {
  std::reverse(c.seq.begin() + i, c.seq.begin() + j + 1);
  std::reverse(c.assign.begin() + i, c.assign.begin() + j + 1);
  for (int k = i; k <= j; ++k) c.seq[k] = -c.seq[k];
}

std::optional<MutationKind> mutate(Chromosome& c, double p_now, const FleetConfig& fleet, Rng& rng) {
  if (uniform01(rng) >= p_now) return std::nullopt;
  std::vector<MutationKind> kinds;
  if (c.size() >= 2) {
    kinds.push_back(MutationKind::Swap);
    kinds.push_back(MutationKind::Inversion);
  }
  if (fleet.num_vehicles() >= 2 && c.size() >= 1) kinds.push_back(MutationKind::Reassignment);
  if (kinds.empty()) return std::nullopt;
  const MutationKind kind = kinds[uniform_int(rng, 0, static_cast<int>(kinds.size()) - 1)];
  switch (kind) {
    case MutationKind::Swap: {
      const int i = uniform_int(rng, 0, c.size() - 1);
      int j = uniform_int(rng, 0, c.size() - 2);
      if (j >= i) ++j;
      swap_genes(c, i, j);
      break;
    }
    case MutationKind::Inversion: {
      const int i = uniform_int(rng, 0, c.size() - 1);
      int j = uniform_int(rng, 0, c.size() - 2);
      if (j >= i) ++j;
      invert_segment(c, std::min(i, j), std::max(i, j));
      break;
    }
    case MutationKind::Reassignment: {
      const int p = uniform_int(rng, 0, c.size() - 1);
      int v = uniform_int(rng, 1, fleet.num_vehicles() - 1);
      if (v >= c.assign[p]) ++v;
      c.assign[p] = v;
      break;
    }
  }
  return kind;
}

}  // namespace rpp
