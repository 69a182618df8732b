#include "rpp/instance.hpp"

#include <cmath>
#include <queue>
#include <set>
#include <utility>

namespace rpp {

InstanceError::InstanceError(const std::string& what, int line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
      line_(line) {}

double Instance::euclidean(NodeId a, NodeId b) const {
  const Node& na = nodes.at(a);
  const Node& nb = nodes.at(b);
  const double dx = na.x - nb.x;
  const double dy = na.y - nb.y;
  return std::sqrt(dx * dx + dy * dy);
}

bool is_connected(const Instance& instance) {
  const int n = instance.num_nodes();
  if (n == 0) return false;
  std::vector<std::vector<NodeId>> adj(n);
  for (const Edge& e : instance.edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<bool> seen(n, false);
  std::queue<NodeId> frontier;
  frontier.push(0);
  seen[0] = true;
  int reached = 1;
  while (!frontier.empty()) {
    NodeId cur = frontier.front();
    frontier.pop();
    for (NodeId next : adj[cur]) {
      if (!seen[next]) {
        seen[next] = true;
        ++reached;
        frontier.push(next);
      }
    }
  }
  return reached == n;
}

void validate(const Instance& instance) {
  const int n = instance.num_nodes();
  if (n < 2) throw InstanceError("instance needs at least two nodes");
  for (int i = 0; i < n; ++i) {
    if (instance.nodes[i].id != i) {
      throw InstanceError("node ids must be contiguous 0..N-1, found " +
                          std::to_string(instance.nodes[i].id) + " at index " + std::to_string(i));
    }
  }
  std::set<std::pair<NodeId, NodeId>> pairs;
  for (int i = 0; i < instance.num_edges(); ++i) {
    const Edge& e = instance.edges[i];
    const std::string where = "edge " + std::to_string(i);
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n) {
      throw InstanceError(where + " references a node outside 0.." + std::to_string(n - 1));
    }
    if (e.u == e.v) throw InstanceError(where + " is a self-loop");
    if (!(e.length > 0.0) || !std::isfinite(e.length)) {
      throw InstanceError(where + " must have a positive finite length");
    }
    if (!pairs.emplace(std::min(e.u, e.v), std::max(e.u, e.v)).second) {
      throw InstanceError(where + " duplicates an earlier edge");
    }
  }
  if (instance.depot < 0 || instance.depot >= n) throw InstanceError("depot is not a valid node");
  if (instance.required_ids.empty()) throw InstanceError("instance has no required edges");
  std::set<int> seen;
  for (int id : instance.required_ids) {
    if (id < 0 || id >= instance.num_edges() || !instance.edges[id].required) {
      throw InstanceError("required edge index " + std::to_string(id) + " is invalid");
    }
    if (!seen.insert(id).second) throw InstanceError("required edge listed twice");
  }
  if (!(instance.truck_speed > 0.0) || !(instance.drone_speed > 0.0) || !(instance.tau > 0.0)) {
    throw InstanceError("speeds and tau must be positive");
  }
  if (!is_connected(instance)) throw InstanceError("road graph is disconnected");
}

double drone_leg_time(const Instance& instance, NodeId a, NodeId b) {
  return instance.euclidean(a, b) / instance.drone_speed;
}

double drone_service_time(const Instance& instance, int edge_index) {
  if (edge_index < 0 || edge_index >= instance.num_edges() || !instance.edges[edge_index].required) {
    throw std::invalid_argument("edge " + std::to_string(edge_index) + " is not a required edge");
  }
  return instance.edges[edge_index].length / instance.drone_speed;
}

double tau_from_beta(const Instance& instance, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  const int n = instance.num_nodes();
  double total = 0.0;
  long long pairs = 0;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      total += instance.euclidean(a, b);
      ++pairs;
    }
  }
  if (pairs == 0) return 0.0;
  return beta / instance.drone_speed * (total / static_cast<double>(pairs));
}

}  // namespace rpp
