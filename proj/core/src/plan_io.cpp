#include "rpp/plan_io.hpp"

#include <cstdlib>
#include <nlohmann/json.hpp>
#include <ostream>

namespace rpp {

std::string plan_to_json(const RoutePlan& plan, const Evaluation& eval, const Instance& instance,
                         const ConfigEcho& config) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["format"] = "rppmtd-plan/1";
  ordered_json cfg = ordered_json::object();
  for (const auto& [k, v] : config) cfg[k] = v;
  doc["config"] = cfg;

  doc["evaluation"] = {
      {"makespan_h", eval.makespan},
      {"makespan_min", eval.makespan * 60.0},
      {"violation_h", eval.violation},
      {"feasible", eval.feasible},
      {"drone_max_flight_h", eval.drone_max_flight},
  };

  ordered_json trucks = ordered_json::array();
  for (const TruckRoute& t : plan.trucks) {
    ordered_json stops = ordered_json::array();
    for (std::size_t p = 0; p < t.nodes.size(); ++p) {
      stops.push_back({{"pos", p},
                       {"node", t.nodes[p]},
                       {"arrival_h", t.arrival[p]},
                       {"departure_h", t.departure[p]}});
    }
    ordered_json services = ordered_json::array();
    for (const ServiceStop& s : t.services) {
      services.push_back({{"task", s.task},
                          {"from", t.nodes[s.start_pos]},
                          {"to", t.nodes[s.end_pos]},
                          {"start_pos", s.start_pos}});
    }
    trucks.push_back({{"system", t.system},
                      {"vehicle", t.vehicle},
                      {"completion_h", t.completion},
                      {"stops", stops},
                      {"services", services}});
  }
  doc["trucks"] = trucks;

  ordered_json sorties = ordered_json::array();
  for (const Sortie& s : plan.sorties) {
    ordered_json arcs = ordered_json::array();
    for (int task : s.tasks) {
      const Edge& e = instance.task_edge(std::abs(task));
      arcs.push_back({{"task", task}, {"from", task > 0 ? e.u : e.v}, {"to", task > 0 ? e.v : e.u}});
    }
    sorties.push_back({{"drone", s.drone},
                       {"system", s.system},
                       {"tasks", s.tasks},
                       {"arcs", arcs},
                       {"launch", {{"node", s.launch_node}, {"pos", s.launch_pos}, {"time_h", s.launch_time}}},
                       {"recovery",
                        {{"node", s.recovery_node}, {"pos", s.recovery_pos}, {"time_h", s.recovery_time}}},
                       {"flight_h", s.flight_time}});
  }
  doc["sorties"] = sorties;
  return doc.dump(2) + "\n";
}

void write_plan_json(std::ostream& out, const RoutePlan& plan, const Evaluation& eval,
                     const Instance& instance, const ConfigEcho& config) {
  out << plan_to_json(plan, eval, instance, config);
}

}  // namespace rpp
