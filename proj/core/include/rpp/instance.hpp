#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace rpp {

using NodeId = int;

struct Node {
  NodeId id = 0;
  double x = 0.0;  // km
  double y = 0.0;  // km

  friend bool operator==(const Node&, const Node&) = default;
};

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  double length = 0.0;  // km
  bool required = false;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// Raised for malformed instance files and for instances that break a
// structural invariant. `line()` is 0 when the problem is not tied to a line.
class InstanceError : public std::runtime_error {
 public:
  explicit InstanceError(const std::string& what, int line = 0);
  int line() const noexcept { return line_; }

 private:
  int line_;
};

// Undirected road network with a required-edge subset. Required tasks are
// numbered 1..R in the order of `required_ids`; task t services
// edges[required_ids[t - 1]].
struct Instance {
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  NodeId depot = 0;
  std::vector<int> required_ids;
  double truck_speed = 40.0;  // km/h
  double drone_speed = 80.0;  // km/h
  double tau = 1.0;           // h
  std::string name;

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  int num_required() const { return static_cast<int>(required_ids.size()); }

  // Edge serviced by task `task` (1-based).
  const Edge& task_edge(int task) const { return edges.at(required_ids.at(task - 1)); }

  double euclidean(NodeId a, NodeId b) const;

  friend bool operator==(const Instance&, const Instance&) = default;
};

// Checks every invariant of an Instance: contiguous node ids, valid and
// distinct edges with positive length, connectivity, R >= 1, positive speeds.
void validate(const Instance& instance);

// Connectivity check by breadth-first search over `edges`.
bool is_connected(const Instance& instance);

struct GeneratorConfig {
  int n_nodes = 50;
  int n_edges = 100;
  int n_required = 15;
  double grid_size = 10.0;  // km
  std::uint64_t seed = 0;
};

// Random instance on a grid_size x grid_size square. Node coordinates are
// snapped to 1/1024 km so Manhattan edge lengths and their sums are exact in
// binary floating point. Only the largest connected component survives; the
// surviving node nearest the origin becomes depot 0.
Instance generate_instance(const GeneratorConfig& config);

// Text format `RPPMTD 1`. Parse and validation errors are InstanceError
// carrying the offending line number.
Instance read_instance(std::istream& in);
void write_instance(const Instance& instance, std::ostream& out);
Instance load_instance(const std::filesystem::path& path);
void save_instance(const Instance& instance, const std::filesystem::path& path);

// Straight-line flight time between two nodes, hours.
double drone_leg_time(const Instance& instance, NodeId a, NodeId b);

// Time for a drone to fly the shadow of required edge `edge_index`, hours.
// Throws std::invalid_argument for a non-required edge.
double drone_service_time(const Instance& instance, int edge_index);

// Endurance from the relative range factor beta: beta / drone_speed times the
// mean Euclidean distance over all unordered node pairs.
double tau_from_beta(const Instance& instance, double beta);

}  // namespace rpp
