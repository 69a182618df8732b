#include "rpp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>

namespace rpp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void dijkstra(const std::vector<std::vector<std::pair<NodeId, double>>>& adj, NodeId src,
              std::span<double> dist, std::span<NodeId> parent) {
  std::fill(dist.begin(), dist.end(), kInf);
  std::fill(parent.begin(), parent.end(), -1);
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[src] = 0.0;
  heap.emplace(0.0, src);
  while (!heap.empty()) {
    auto [d, x] = heap.top();
    heap.pop();
    if (d > dist[x]) continue;
    for (auto [y, len] : adj[x]) {
      const double nd = d + len;
      if (nd < dist[y]) {
        dist[y] = nd;
        parent[y] = x;
        heap.emplace(nd, y);
      }
    }
  }
}

RoadPath make_path(std::vector<NodeId> nodes,
                   const std::vector<std::vector<std::pair<NodeId, double>>>& adj) {
  RoadPath path;
  path.nodes = std::move(nodes);
  for (std::size_t i = 0; i + 1 < path.nodes.size(); ++i) {
    double len = kInf;
    for (auto [y, l] : adj[path.nodes[i]]) {
      if (y == path.nodes[i + 1]) len = l;
    }
    path.hop_km.push_back(len);
    path.length_km += len;
  }
  return path;
}

// Up to `cap` distinct shortest paths src -> dst, walking the shortest-path
// DAG backwards from dst. Predecessors are visited in node-id order.
std::vector<RoadPath> enumerate_paths(const std::vector<std::vector<std::pair<NodeId, double>>>& adj,
                                      std::span<const double> dist, NodeId src, NodeId dst,
                                      std::size_t cap) {
  std::vector<RoadPath> out;
  std::vector<NodeId> suffix{dst};
  std::function<void(NodeId)> walk = [&](NodeId x) {
    if (out.size() >= cap) return;
    if (x == src) {
      std::vector<NodeId> nodes(suffix.rbegin(), suffix.rend());
      out.push_back(make_path(std::move(nodes), adj));
      return;
    }
    for (auto [y, len] : adj[x]) {
      const double tol = MetricTables::kTieTolerance;
      if (std::abs(dist[y] + len - dist[x]) <= tol && dist[y] < dist[x]) {
        suffix.push_back(y);
        walk(y);
        suffix.pop_back();
        if (out.size() >= cap) return;
      }
    }
  };
  walk(dst);
  return out;
}

RoadPath reversed(const RoadPath& p) {
  RoadPath r;
  r.nodes.assign(p.nodes.rbegin(), p.nodes.rend());
  r.hop_km.assign(p.hop_km.rbegin(), p.hop_km.rend());
  for (double h : r.hop_km) r.length_km += h;
  return r;
}

}  // namespace

MetricTables MetricTables::build(const Instance& instance, std::size_t path_cap) {
  if (path_cap == 0) throw std::invalid_argument("path cap must be positive");
  MetricTables m;
  const int n = instance.num_nodes();
  m.n_ = n;
  m.adj_.assign(n, {});
  for (const Edge& e : instance.edges) {
    m.adj_[e.u].emplace_back(e.v, e.length);
    m.adj_[e.v].emplace_back(e.u, e.length);
  }
  for (auto& row : m.adj_) std::sort(row.begin(), row.end());

  const std::size_t nn = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  m.dist_.assign(nn, kInf);
  m.parent_.assign(nn, -1);
  for (NodeId s = 0; s < n; ++s) {
    const std::size_t off = static_cast<std::size_t>(s) * n;
    dijkstra(m.adj_, s, std::span<double>(m.dist_).subspan(off, n),
             std::span<NodeId>(m.parent_).subspan(off, n));
  }

  m.key_slot_.assign(n, -1);
  std::vector<NodeId> keys;
  auto add_key = [&](NodeId v) {
    if (m.key_slot_[v] < 0) {
      m.key_slot_[v] = static_cast<int>(keys.size());
      keys.push_back(v);
    }
  };
  add_key(instance.depot);
  for (int id : instance.required_ids) {
    const Edge& e = instance.edges[id];
    add_key(e.u);
    add_key(e.v);
    m.task_endpoints_.emplace_back(e.u, e.v);
  }
  m.n_keys_ = static_cast<int>(keys.size());
  m.key_paths_.assign(static_cast<std::size_t>(m.n_keys_) * m.n_keys_, {});

  // Paths are enumerated from the smaller node id and mirrored, so a -> b and
  // b -> a always offer the same routes.
  for (NodeId a : keys) {
    const auto row = std::span<const double>(m.dist_).subspan(static_cast<std::size_t>(a) * n, n);
    for (NodeId b : keys) {
      if (b < a) continue;
      auto forward = enumerate_paths(m.adj_, row, a, b, path_cap);
      std::vector<RoadPath> backward;
      for (const RoadPath& p : forward) backward.push_back(reversed(p));
      m.key_paths_[static_cast<std::size_t>(m.key_slot_[a]) * m.n_keys_ + m.key_slot_[b]] =
          std::move(forward);
      if (a != b) {
        m.key_paths_[static_cast<std::size_t>(m.key_slot_[b]) * m.n_keys_ + m.key_slot_[a]] =
            std::move(backward);
      }
    }
  }

  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b = a + 1; b < n; ++b) m.dist_[m.index(b, a)] = m.dist_[m.index(a, b)];
  }
  return m;
}

std::span<const RoadPath> MetricTables::paths(NodeId a, NodeId b) const {
  if (a < 0 || a >= n_ || b < 0 || b >= n_ || key_slot_[a] < 0 || key_slot_[b] < 0) {
    throw std::out_of_range("co-optimal paths are stored only between key nodes");
  }
  return key_paths_[static_cast<std::size_t>(key_slot_[a]) * n_keys_ + key_slot_[b]];
}

RoadPath MetricTables::shortest_path(NodeId a, NodeId b) const {
  std::vector<NodeId> rev{b};
  for (NodeId x = b; x != a;) {
    x = parent_[index(a, x)];
    if (x < 0) throw std::logic_error("no road path between nodes");
    rev.push_back(x);
  }
  return make_path(std::vector<NodeId>(rev.rbegin(), rev.rend()), adj_);
}

}  // namespace rpp
