#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "rpp/chromosome.hpp"
#include "rpp/instance.hpp"
#include "rpp/metrics.hpp"
#include "rpp/rng.hpp"

namespace rpp {

// Picks one of `n_options` co-optimal road paths for the next truck
// connection. Only consulted when n_options > 1.
using PathPicker = std::function<std::size_t(std::size_t n_options)>;

struct ServiceStop {
  int task = 0;       // signed task id
  int start_pos = 0;  // route position of the tail node
  int end_pos = 0;    // route position of the head node (start_pos + 1)
};

struct TruckRoute {
  int system = 0;
  int vehicle = 0;
  std::vector<NodeId> nodes;       // depot ... depot
  std::vector<double> arrival;     // hours, per position
  std::vector<double> departure;   // hours, per position (includes rendezvous waits)
  std::vector<ServiceStop> services;
  double completion = 0.0;         // depot return time
};

struct Sortie {
  int drone = 0;  // vehicle id
  int system = 0;
  NodeId launch_node = 0;
  int launch_pos = 0;
  NodeId recovery_node = 0;
  int recovery_pos = 0;
  std::vector<int> tasks;  // signed task ids, in service order
  double flight_time = 0.0;    // hours airborne
  double launch_time = 0.0;    // hours
  double recovery_time = 0.0;  // drone arrival at the recovery node
};

struct RoutePlan {
  std::vector<TruckRoute> trucks;  // one per system
  std::vector<Sortie> sorties;     // grouped by system, in placement order
};

struct Evaluation {
  double makespan = 0.0;                 // hours
  std::vector<double> drone_max_flight;  // hours, indexed by FleetConfig::drone_index
  double violation = 0.0;                // sum of per-drone endurance excess, hours
  bool feasible = true;

  friend bool operator==(const Evaluation&, const Evaluation&) = default;
};

Evaluation evaluate(const RoutePlan& plan, const FleetConfig& fleet);

// makespan + w_inf * violation.
double penalized_cost(const Evaluation& eval, double w_inf);

// Outcome of decoding one truck system in isolation.
struct SystemScore {
  double completion = 0.0;
  std::vector<double> drone_max_flight;  // M entries
};

// Combines one score per system into a fleet evaluation with the same
// arithmetic as evaluate(plan).
Evaluation combine(std::span<const SystemScore> systems, const FleetConfig& fleet);

// Turns chromosomes into synchronized truck/drone plans.
//
// Each truck system decodes independently from its own RNG stream
// derive_seed(decode_seed, {system}), so re-decoding one system reproduces
// the corresponding part of a full decode. A Decoder owns scratch buffers and
// must not be shared between threads.
class Decoder {
 public:
  Decoder(const Instance& instance, const MetricTables& metrics, FleetConfig fleet);
  Decoder(const Decoder& other);
  Decoder& operator=(const Decoder& other);
  Decoder(Decoder&&) noexcept;
  Decoder& operator=(Decoder&&) noexcept;
  ~Decoder();

  const Instance& instance() const { return *instance_; }
  const MetricTables& metrics() const { return *metrics_; }
  const FleetConfig& fleet() const { return fleet_; }

  RoutePlan decode(const Chromosome& c, std::uint64_t decode_seed) const;
  Evaluation evaluate(const Chromosome& c, std::uint64_t decode_seed) const;

  // Decode with explicit path choices; `pick` is consulted once per
  // multi-option connection, systems in order, connections along the route.
  RoutePlan decode(const Chromosome& c, const PathPicker& pick) const;
  Evaluation evaluate(const Chromosome& c, const PathPicker& pick) const;

  // Number of co-optimal options for every truck connection of `c`, in the
  // order a PathPicker would be consulted (single-option connections are
  // omitted).
  std::vector<std::size_t> path_options(const Chromosome& c) const;

  // Decodes only the genes of `system` (genes of other systems are ignored).
  SystemScore score_system(std::span<const int> seq, std::span<const int> assign, int system,
                           std::uint64_t decode_seed) const;

 private:
  struct Work;
  SystemScore run_system(std::span<const int> seq, std::span<const int> assign, int system,
                         const PathPicker& pick, RoutePlan* plan) const;

  const Instance* instance_;
  const MetricTables* metrics_;
  FleetConfig fleet_;
  int hop_limit_;
  std::unique_ptr<Work> work_;
};

// Free-function form: draws the decode seed from `rng`.
RoutePlan decode(const Chromosome& c, const Instance& instance, const MetricTables& metrics,
                 const FleetConfig& fleet, Rng& rng);

}  // namespace rpp
