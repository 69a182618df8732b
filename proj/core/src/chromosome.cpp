#include "rpp/chromosome.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace rpp {

void FleetConfig::validate() const {
  if (trucks < 1) throw std::invalid_argument("fleet needs at least one truck");
  if (drones_per_truck < 0) throw std::invalid_argument("drones per truck cannot be negative");
  if (delta && *delta < 1) throw std::invalid_argument("delta must be at least 1");
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
}

std::optional<std::string> check_chromosome(const Chromosome& c, int n_required,
                                            const FleetConfig& fleet) {
  if (c.size() != n_required || static_cast<int>(c.assign.size()) != n_required) {
    return "chromosome length differs from R";
  }
  std::vector<bool> seen(n_required + 1, false);
  for (int g : c.seq) {
    const int id = std::abs(g);
    if (id < 1 || id > n_required) return "task id " + std::to_string(g) + " out of range";
    if (seen[id]) return "task " + std::to_string(id) + " appears twice";
    seen[id] = true;
  }
  for (int v : c.assign) {
    if (v < 1 || v > fleet.num_vehicles()) return "vehicle id " + std::to_string(v) + " out of range";
  }
  return std::nullopt;
}

bool is_valid(const Chromosome& c, int n_required, const FleetConfig& fleet) {
  return !check_chromosome(c, n_required, fleet).has_value();
}

Chromosome random_chromosome(int n_required, const FleetConfig& fleet, Rng& rng) {
  Chromosome c;
  c.seq.resize(n_required);
  std::iota(c.seq.begin(), c.seq.end(), 1);
  std::shuffle(c.seq.begin(), c.seq.end(), rng);
  for (int& g : c.seq) {
    if (coin(rng)) g = -g;
  }
  c.assign.resize(n_required);
  for (int& v : c.assign) v = uniform_int(rng, 1, fleet.num_vehicles());
  return c;
}

std::string to_string(const Chromosome& c) {
  std::ostringstream out;
  out << '[';
  for (int i = 0; i < c.size(); ++i) out << (i ? "," : "") << c.seq[i];
  out << "] [";
  for (int i = 0; i < c.size(); ++i) out << (i ? "," : "") << c.assign[i];
  out << ']';
  return out.str();
}

}  // namespace rpp
