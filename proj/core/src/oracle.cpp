#include "rpp/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "rpp/evolution.hpp"

namespace rpp {

SearchSpaceTooLarge::SearchSpaceTooLarge(double size, double limit)
    : std::runtime_error("oracle search space of " + std::to_string(size) + " chromosomes exceeds the limit of " +
                         std::to_string(limit)),
      size_(size) {}

double search_space_size(int n_required, int n_vehicles) {
  double size = 1.0;
  for (int k = 1; k <= n_required; ++k) size *= k * 2.0 * n_vehicles;
  return size;
}

namespace {

bool better(const Evaluation& a, const Evaluation& b) {
  if (a.feasible != b.feasible) return a.feasible;
  if (a.feasible) return a.makespan < b.makespan;
  if (a.violation != b.violation) return a.violation < b.violation;
  return a.makespan < b.makespan;
}

}  // namespace

OracleResult exhaustive_solve(const Instance& instance, const MetricTables& metrics, const FleetConfig& fleet,
                              double max_plans) {
  fleet.validate();
  const int n = instance.num_required();
  const int vehicles = fleet.num_vehicles();
  const double size = search_space_size(n, vehicles);
  if (size > max_plans) throw SearchSpaceTooLarge(size, max_plans);

  const Decoder decoder(instance, metrics, fleet);
  OracleResult best;
  bool have = false;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 1);
  Chromosome c{std::vector<int>(n), std::vector<int>(n, 1)};
  do {
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      for (int p = 0; p < n; ++p) c.seq[p] = (mask >> p) & 1u ? -perm[p] : perm[p];
      std::fill(c.assign.begin(), c.assign.end(), 1);
      while (true) {
        const std::vector<std::size_t> options = decoder.path_options(c);
        for_each_choice(options, [&](const std::vector<std::size_t>& choice) {
          const Evaluation eval = decoder.evaluate(c, replay_picker(choice));
          ++best.plans_decoded;
          if (!have || better(eval, best.eval)) {
            have = true;
            best.eval = eval;
            best.chromosome = c;
            best.path_choices = choice;
          }
        });
        int k = n - 1;
        while (k >= 0 && c.assign[k] == vehicles) c.assign[k--] = 1;
        if (k < 0) break;
        ++c.assign[k];
      }
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  best.plan = decoder.decode(best.chromosome, replay_picker(best.path_choices));
  best.eval = evaluate(best.plan, fleet);
  best.feasible = best.eval.feasible;
  return best;
}

}  // namespace rpp
