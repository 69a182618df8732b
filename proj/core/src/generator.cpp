#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <set>

#include "rpp/instance.hpp"
#include "rpp/rng.hpp"

namespace rpp {
namespace {

constexpr double kCoordinateQuantum = 1024.0;  // ticks per km

double snap(double km) { return std::round(km * kCoordinateQuantum) / kCoordinateQuantum; }

class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(n), size_(n, 1) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
  }
  int size_of(int x) { return size_[find(x)]; }

 private:
  std::vector<int> parent_;
  std::vector<int> size_;
};

}  // namespace

Instance generate_instance(const GeneratorConfig& cfg) {
  if (cfg.n_nodes < 2) throw InstanceError("n_nodes must be at least 2");
  if (cfg.n_required <= 0) throw InstanceError("n_required must be positive");
  if (cfg.n_edges < cfg.n_nodes - 1) throw InstanceError("n_edges must be at least n_nodes - 1");
  if (cfg.n_required > cfg.n_edges) throw InstanceError("n_required cannot exceed n_edges");
  const long long max_pairs = static_cast<long long>(cfg.n_nodes) * (cfg.n_nodes - 1) / 2;
  if (cfg.n_edges > max_pairs) throw InstanceError("n_edges exceeds the number of node pairs");
  if (!(cfg.grid_size > 0.0)) throw InstanceError("grid_size must be positive");

  Rng rng(cfg.seed);
  std::uniform_real_distribution<double> coord(0.0, cfg.grid_size);

  // Distinct snapped coordinates keep every Manhattan length positive.
  std::vector<std::pair<double, double>> xy;
  std::set<std::pair<double, double>> taken;
  while (static_cast<int>(xy.size()) < cfg.n_nodes) {
    std::pair<double, double> p{snap(coord(rng)), snap(coord(rng))};
    p.first = std::clamp(p.first, 0.0, cfg.grid_size);
    p.second = std::clamp(p.second, 0.0, cfg.grid_size);
    if (taken.insert(p).second) xy.push_back(p);
  }

  std::vector<std::pair<int, int>> candidates;
  std::set<std::pair<int, int>> used;
  while (static_cast<int>(candidates.size()) < cfg.n_edges) {
    int a = uniform_int(rng, 0, cfg.n_nodes - 1);
    int b = uniform_int(rng, 0, cfg.n_nodes - 1);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (used.emplace(a, b).second) candidates.emplace_back(a, b);
  }

  DisjointSets sets(cfg.n_nodes);
  for (auto [a, b] : candidates) sets.unite(a, b);
  int keep_root = sets.find(0);
  for (int i = 1; i < cfg.n_nodes; ++i) {
    if (sets.size_of(i) > sets.size_of(keep_root)) keep_root = sets.find(i);
  }

  std::vector<int> members;
  for (int i = 0; i < cfg.n_nodes; ++i) {
    if (sets.find(i) == keep_root) members.push_back(i);
  }
  int depot = members.front();
  for (int i : members) {
    const double di = std::hypot(xy[i].first, xy[i].second);
    const double dd = std::hypot(xy[depot].first, xy[depot].second);
    if (di < dd) depot = i;
  }

  std::vector<int> relabel(cfg.n_nodes, -1);
  relabel[depot] = 0;
  int next_id = 1;
  for (int i : members) {
    if (i != depot) relabel[i] = next_id++;
  }

  Instance inst;
  inst.nodes.resize(members.size());
  for (int i : members) inst.nodes[relabel[i]] = Node{relabel[i], xy[i].first, xy[i].second};
  for (auto [a, b] : candidates) {
    if (relabel[a] < 0) continue;
    const double len = std::abs(xy[a].first - xy[b].first) + std::abs(xy[a].second - xy[b].second);
    inst.edges.push_back(Edge{relabel[a], relabel[b], len, false});
  }

  std::vector<int> order(inst.edges.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  int n_required = cfg.n_required;
  if (n_required > inst.num_edges()) {
    std::cerr << "warning: component has " << inst.num_edges() << " edges, fewer than the "
              << n_required << " requested required edges; marking all required\n";
    n_required = inst.num_edges();
  }
  order.resize(n_required);
  std::sort(order.begin(), order.end());
  for (int id : order) inst.edges[id].required = true;
  inst.required_ids = order;
  inst.depot = 0;
  inst.name = "N" + std::to_string(inst.num_nodes()) + "E" + std::to_string(inst.num_edges()) +
              "R" + std::to_string(inst.num_required()) + "_s" + std::to_string(cfg.seed);

  validate(inst);
  return inst;
}

}  // namespace rpp
