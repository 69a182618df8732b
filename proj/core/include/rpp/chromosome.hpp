#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rpp/rng.hpp"

namespace rpp {

// Fleet of `trucks` truck systems, each carrying `drones_per_truck` drones.
// Vehicle ids are 1-based: truck k (0-based system k) is k*(M+1)+1 and its
// drones follow it.
struct FleetConfig {
  int trucks = 1;
  int drones_per_truck = 0;
  std::optional<int> delta;  // hop window; nullopt = unbounded
  double tau = 1.0;          // hours

  int num_vehicles() const { return trucks * (drones_per_truck + 1); }
  int num_drones() const { return trucks * drones_per_truck; }
  int system_of(int vehicle) const { return (vehicle - 1) / (drones_per_truck + 1); }
  bool is_truck(int vehicle) const { return (vehicle - 1) % (drones_per_truck + 1) == 0; }
  int truck_vehicle(int system) const { return system * (drones_per_truck + 1) + 1; }
  // Dense 0-based drone index, for per-drone tables.
  int drone_index(int vehicle) const {
    return system_of(vehicle) * drones_per_truck + (vehicle - 1) % (drones_per_truck + 1) - 1;
  }
  // Unbounded windows become R * N, a hop count no route can reach.
  int hop_limit(int n_required, int n_nodes) const {
    return delta.value_or(n_required * n_nodes);
  }

  void validate() const;
};

// Two-part chromosome: signed task ids (|id| in 1..R, negative = traverse the
// required edge v -> u) and the vehicle performing each step.
struct Chromosome {
  std::vector<int> seq;
  std::vector<int> assign;

  int size() const { return static_cast<int>(seq.size()); }

  friend bool operator==(const Chromosome&, const Chromosome&) = default;
};

// Empty optional when valid; otherwise a description of the first problem.
std::optional<std::string> check_chromosome(const Chromosome& c, int n_required, const FleetConfig& fleet);
bool is_valid(const Chromosome& c, int n_required, const FleetConfig& fleet);

// Uniform signed permutation with uniform vehicle assignment.
Chromosome random_chromosome(int n_required, const FleetConfig& fleet, Rng& rng);

std::string to_string(const Chromosome& c);

}  // namespace rpp
