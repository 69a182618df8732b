#pragma once

#include <cstdint>
#include <vector>

#include "rpp/chromosome.hpp"
#include "rpp/routing.hpp"

namespace rpp {

// A chromosome with its cached decode. The caches are only valid for the
// chromosome and decode seed they were computed from; build a new
// Individual whenever the chromosome changes.
struct Individual {
  Chromosome chromosome;
  std::uint64_t decode_seed = 0;
  std::vector<SystemScore> systems;  // per truck system
  Evaluation eval;
  double cost = 0.0;     // penalized cost at the w_inf last used
  double div = 1.0;      // diversity against the current population
  double fitness = 0.0;  // cost * (n_E / n_P)^div
};

Individual make_individual(Chromosome c, std::uint64_t decode_seed, const Decoder& decoder,
                           double w_inf);

// Re-evaluates the penalized cost after a penalty-weight change.
void reprice(Individual& ind, double w_inf);

}  // namespace rpp
