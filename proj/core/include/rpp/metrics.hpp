#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "rpp/instance.hpp"

namespace rpp {

// A road path as a node sequence; hop_km[i] is the length of the edge
// nodes[i] -> nodes[i + 1].
struct RoadPath {
  std::vector<NodeId> nodes;
  std::vector<double> hop_km;
  double length_km = 0.0;
};

// Precomputed truck metric. Distances are all-pairs; co-optimal path sets are
// kept only between key nodes (the depot and required-edge endpoints), which
// are the only pairs a truck route ever connects.
class MetricTables {
 public:
  static constexpr std::size_t kDefaultPathCap = 8;
  static constexpr double kTieTolerance = 1e-9;  // km

  static MetricTables build(const Instance& instance, std::size_t path_cap = kDefaultPathCap);

  int num_nodes() const { return n_; }
  double distance(NodeId a, NodeId b) const { return dist_[index(a, b)]; }

  bool is_key_node(NodeId v) const { return key_slot_[v] >= 0; }

  // Co-optimal shortest paths a -> b (at least one, at most the cap).
  // Both endpoints must be key nodes.
  std::span<const RoadPath> paths(NodeId a, NodeId b) const;

  // One shortest path between any pair, rebuilt from the predecessor tree.
  RoadPath shortest_path(NodeId a, NodeId b) const;

  // Endpoints (u, v) of task `task` (1-based) in stored orientation.
  std::pair<NodeId, NodeId> endpoints(int task) const { return task_endpoints_.at(task - 1); }

 private:
  std::size_t index(NodeId a, NodeId b) const {
    return static_cast<std::size_t>(a) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(b);
  }

  int n_ = 0;
  std::vector<double> dist_;
  std::vector<NodeId> parent_;  // parent_[index(src, v)]: predecessor of v on a path from src
  std::vector<std::vector<std::pair<NodeId, double>>> adj_;
  std::vector<int> key_slot_;
  int n_keys_ = 0;
  std::vector<std::vector<RoadPath>> key_paths_;
  std::vector<std::pair<NodeId, NodeId>> task_endpoints_;
};

}  // namespace rpp
