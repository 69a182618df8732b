#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "rpp/routing.hpp"

namespace rpp {

// Ordered key/value pairs echoed verbatim into output artifacts.
using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

// Plan export, a JSON document:
//
//   {
//     "format": "rppmtd-plan/1",
//     "config": { <echoed key/value strings> },
//     "evaluation": { "makespan_h", "makespan_min", "violation_h", "feasible",
//                     "drone_max_flight_h": [...] },
//     "trucks": [ { "system", "vehicle", "completion_h",
//                   "stops": [ { "pos", "node", "arrival_h", "departure_h" } ],
//                   "services": [ { "task", "from", "to", "start_pos" } ] } ],
//     "sorties": [ { "drone", "system", "tasks": [signed ids],
//                    "arcs": [ { "task", "from", "to" } ],
//                    "launch":   { "node", "pos", "time_h" },
//                    "recovery": { "node", "pos", "time_h" },
//                    "flight_h" } ]
//   }
//
// Times are hours from the fleet leaving the depot. Serviced arcs are listed
// as signed task ids; `from`/`to` give the traversal direction.
void write_plan_json(std::ostream& out, const RoutePlan& plan, const Evaluation& eval,
                     const Instance& instance, const ConfigEcho& config);

std::string plan_to_json(const RoutePlan& plan, const Evaluation& eval, const Instance& instance,
                         const ConfigEcho& config);

}  // namespace rpp
