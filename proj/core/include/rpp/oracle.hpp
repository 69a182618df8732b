#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rpp/chromosome.hpp"
#include "rpp/instance.hpp"
#include "rpp/metrics.hpp"
#include "rpp/routing.hpp"

namespace rpp {

// Thrown when R! * 2^R * V^R exceeds the plan limit.
class SearchSpaceTooLarge : public std::runtime_error {
 public:
  SearchSpaceTooLarge(double size, double limit);
  double size() const { return size_; }

 private:
  double size_;
};

struct OracleResult {
  Chromosome chromosome;
  std::vector<std::size_t> path_choices;
  RoutePlan plan;
  Evaluation eval;
  bool feasible = false;
  std::uint64_t plans_decoded = 0;
};

// Number of chromosomes: R! * 2^R * vehicles^R.
double search_space_size(int n_required, int n_vehicles);

// Exact optimum over every signed permutation, assignment and co-optimal path
// choice, decoded with the same arithmetic as Decoder. Prefers feasible plans
// by makespan, otherwise the least violation. The first optimum in
// enumeration order is returned.
OracleResult exhaustive_solve(const Instance& instance, const MetricTables& metrics, const FleetConfig& fleet,
                              double max_plans = 1e7);

}  // namespace rpp
