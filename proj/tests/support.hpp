#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <queue>
#include <vector>

#include "rpp/chromosome.hpp"
#include "rpp/instance.hpp"
#include "rpp/routing.hpp"

namespace rpp::test {

inline Instance make_instance(std::vector<Node> nodes, std::vector<Edge> edges, std::vector<int> required_ids,
                              double tau = 1.0) {
  Instance inst;
  inst.nodes = std::move(nodes);
  inst.edges = std::move(edges);
  inst.required_ids = std::move(required_ids);
  inst.depot = 0;
  inst.truck_speed = 40.0;
  inst.drone_speed = 80.0;
  inst.tau = tau;
  inst.name = "hand";
  return inst;
}

// Depot (0,0), node 1 (0,4), node 2 (3,4); edge 1-2 is the only required one.
inline Instance triangle() {
  return make_instance({{0, 0.0, 0.0}, {1, 0.0, 4.0}, {2, 3.0, 4.0}},
                       {{0, 1, 4.0, false}, {1, 2, 3.0, true}, {2, 0, 7.0, false}}, {1});
}

// Breadth-first connectivity, written independently of the library.
inline bool bfs_connected(const Instance& inst) {
  const int n = static_cast<int>(inst.nodes.size());
  std::vector<std::vector<int>> adj(n);
  for (const Edge& e : inst.edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<bool> seen(n, false);
  std::queue<int> q;
  q.push(0);
  seen[0] = true;
  int count = 1;
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        ++count;
        q.push(v);
      }
    }
  }
  return count == n;
}

inline std::vector<std::vector<double>> floyd_warshall(const Instance& inst) {
  const int n = static_cast<int>(inst.nodes.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
  for (int i = 0; i < n; ++i) d[i][i] = 0.0;
  for (const Edge& e : inst.edges) {
    d[e.u][e.v] = std::min(d[e.u][e.v], e.length);
    d[e.v][e.u] = std::min(d[e.v][e.u], e.length);
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

// Independent permutation and vehicle-range check.
inline bool valid_chromosome(const Chromosome& c, int n_required, int n_vehicles) {
  if (c.size() != n_required || static_cast<int>(c.assign.size()) != n_required) return false;
  std::vector<int> seen(n_required + 1, 0);
  for (int g : c.seq) {
    const int id = std::abs(g);
    if (id < 1 || id > n_required || seen[id]++) return false;
  }
  return std::all_of(c.assign.begin(), c.assign.end(), [&](int v) { return v >= 1 && v <= n_vehicles; });
}

// Every task serviced exactly once across trucks and sorties.
inline bool covers_all(const RoutePlan& plan, int n_required) {
  std::vector<int> seen(n_required + 1, 0);
  for (const TruckRoute& t : plan.trucks)
    for (const ServiceStop& s : t.services) ++seen[std::abs(s.task)];
  for (const Sortie& s : plan.sorties)
    for (int t : s.tasks) ++seen[std::abs(t)];
  for (int id = 1; id <= n_required; ++id)
    if (seen[id] != 1) return false;
  return true;
}

}  // namespace rpp::test
