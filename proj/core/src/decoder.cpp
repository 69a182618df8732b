#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

#include "rpp/routing.hpp"

namespace rpp {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct SortieWork {
  int vehicle = 0;
  int slot = 0;        // 0..M-1 within the system
  int first_gene = 0;  // gene range [first_gene, last_gene] in the system list
  int last_gene = 0;
  NodeId entry = 0;  // tail of the first serviced arc
  NodeId exit = 0;   // head of the last serviced arc
  double inner_km = 0.0;
  int anchor_lo = 0;
  int anchor_hi = 0;
  int launch = 0;
  int recover = 0;
  double flight = 0.0;  // hours
  double launch_t = 0.0;
  double recover_t = 0.0;
};

struct Candidate {
  int launch;
  int recover;
  double flight;
  double excess;
};

}  // namespace

struct Decoder::Work {
  std::vector<int> gseq;
  std::vector<int> gveh;
  std::vector<NodeId> nodes;
  std::vector<double> cum_km;
  std::vector<ServiceStop> services;
  std::vector<int> service_gene;
  std::vector<int> next_truck_start;
  std::vector<SortieWork> sorties;
  std::vector<int> order;  // placed sorties sorted by (launch, index)
  std::vector<double> arr, dep, recmax, ready;
  std::vector<double> arr2, dep2;
  std::vector<double> anchor_t, anchor_km;  // anchor in effect on arrival, per position
  std::vector<double> base_ready;
  std::vector<double> legs;
  std::vector<Candidate> cands;
  std::vector<double> back_km;  // exit -> route position, from the lowest launch
  std::vector<std::pair<double, Candidate>> delayed;  // (completion bound, candidate)
};

Decoder::Decoder(const Instance& instance, const MetricTables& metrics, FleetConfig fleet)
    : instance_(&instance),
      metrics_(&metrics),
      fleet_(fleet),
      hop_limit_(fleet.hop_limit(instance.num_required(), instance.num_nodes())),
      work_(std::make_unique<Work>()) {
  fleet_.validate();
}

Decoder::Decoder(const Decoder& other)
    : instance_(other.instance_),
      metrics_(other.metrics_),
      fleet_(other.fleet_),
      hop_limit_(other.hop_limit_),
      work_(std::make_unique<Work>()) {}

Decoder& Decoder::operator=(const Decoder& other) {
  if (this != &other) {
    instance_ = other.instance_;
    metrics_ = other.metrics_;
    fleet_ = other.fleet_;
    hop_limit_ = other.hop_limit_;
    work_ = std::make_unique<Work>();
  }
  return *this;
}

Decoder::Decoder(Decoder&&) noexcept = default;
Decoder& Decoder::operator=(Decoder&&) noexcept = default;
Decoder::~Decoder() = default;

SystemScore Decoder::run_system(std::span<const int> seq, std::span<const int> assign, int system,
                                const PathPicker& pick, RoutePlan* plan) const {
  Work& w = *work_;
  const Instance& inst = *instance_;
  const MetricTables& met = *metrics_;
  const int M = fleet_.drones_per_truck;
  const int truck_vid = fleet_.truck_vehicle(system);
  const double ts = inst.truck_speed;
  const double ds = inst.drone_speed;
  const double tau = fleet_.tau;

  w.gseq.clear();
  w.gveh.clear();
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (fleet_.system_of(assign[i]) == system) {
      w.gseq.push_back(seq[i]);
      w.gveh.push_back(assign[i]);
    }
  }
  const int n_genes = static_cast<int>(w.gseq.size());

  auto oriented = [&](int g) {
    auto [u, v] = met.endpoints(std::abs(g));
    return g > 0 ? std::pair{u, v} : std::pair{v, u};
  };

  // Truck route: depot, then for each truck task a connecting shortest path
  // and the service hop, then back to the depot.
  w.nodes.assign(1, inst.depot);
  w.cum_km.assign(1, 0.0);
  w.services.clear();
  w.service_gene.clear();
  auto append_path = [&](NodeId from, NodeId to) {
    auto options = met.paths(from, to);
    std::size_t choice = 0;
    if (options.size() > 1) {
      choice = pick(options.size());
      if (choice >= options.size()) throw std::out_of_range("path choice out of range");
    }
    const RoadPath& path = options[choice];
    for (std::size_t h = 0; h < path.hop_km.size(); ++h) {
      w.nodes.push_back(path.nodes[h + 1]);
      w.cum_km.push_back(w.cum_km.back() + path.hop_km[h]);
    }
  };
  NodeId cur = inst.depot;
  for (int gi = 0; gi < n_genes; ++gi) {
    if (w.gveh[gi] != truck_vid) continue;
    auto [a, b] = oriented(w.gseq[gi]);
    append_path(cur, a);
    const int start = static_cast<int>(w.nodes.size()) - 1;
    w.nodes.push_back(b);
    w.cum_km.push_back(w.cum_km.back() + inst.task_edge(std::abs(w.gseq[gi])).length);
    w.services.push_back(ServiceStop{w.gseq[gi], start, start + 1});
    w.service_gene.push_back(gi);
    cur = b;
  }
  append_path(cur, inst.depot);
  const int P = static_cast<int>(w.nodes.size()) - 1;

  w.next_truck_start.assign(n_genes + 1, P);
  for (int gi = n_genes - 1, k = static_cast<int>(w.services.size()) - 1; gi >= 0; --gi) {
    w.next_truck_start[gi] = w.next_truck_start[gi + 1];
    if (k >= 0 && w.service_gene[k] == gi) {
      w.next_truck_start[gi] = w.services[k].start_pos;
      --k;
    }
  }

  // Sorties: maximal runs of consecutive genes on the same drone, anchored
  // between the surrounding truck services.
  w.sorties.clear();
  int last_truck_end = 0;
  for (int gi = 0, k = 0; gi < n_genes;) {
    if (w.gveh[gi] == truck_vid) {
      last_truck_end = w.services[k++].end_pos;
      ++gi;
      continue;
    }
    int end = gi;
    while (end + 1 < n_genes && w.gveh[end + 1] == w.gveh[gi]) ++end;
    SortieWork s;
    s.vehicle = w.gveh[gi];
    s.slot = (w.gveh[gi] - 1) % (M + 1) - 1;
    s.first_gene = gi;
    s.last_gene = end;
    s.entry = oriented(w.gseq[gi]).first;
    s.exit = oriented(w.gseq[end]).second;
    w.legs.clear();
    for (int j = gi; j <= end; ++j) {
      w.legs.push_back(inst.task_edge(std::abs(w.gseq[j])).length);
      if (j < end) w.legs.push_back(inst.euclidean(oriented(w.gseq[j]).second, oriented(w.gseq[j + 1]).first));
    }
    // Summing in sorted order makes the flight independent of the direction
    // in which the same legs are flown.
    std::sort(w.legs.begin(), w.legs.end());
    for (double leg : w.legs) s.inner_km += leg;
    s.anchor_lo = last_truck_end;
    s.anchor_hi = w.next_truck_start[end];
    w.sorties.push_back(s);
    gi = end + 1;
  }

  const int n_sorties = static_cast<int>(w.sorties.size());
  w.arr.assign(P + 1, 0.0);
  w.dep.assign(P + 1, 0.0);
  w.arr2.assign(P + 1, 0.0);
  w.dep2.assign(P + 1, 0.0);
  w.recmax.assign(P + 1, kNegInf);
  w.anchor_t.assign(P + 1, 0.0);
  w.anchor_km.assign(P + 1, 0.0);
  w.ready.assign(std::max(M, 1), 0.0);
  w.order.clear();

  // Timeline of the truck with the placed sorties, resumed at position
  // `from` from the recorded anchor state. This reproduces a full run exactly
  // whenever nothing before `from` changed. A base run (no candidate)
  // records the anchor state per position and the sortie times.
  auto simulate = [&](const SortieWork* cand, int from, std::vector<double>& arr, std::vector<double>& dep) {
    double anchor_t = 0.0;
    double anchor_km = 0.0;
    std::size_t next = 0;
    if (from == 0) {
      std::fill(w.recmax.begin(), w.recmax.end(), kNegInf);
      std::fill(w.ready.begin(), w.ready.end(), 0.0);
    } else {
      std::fill(w.recmax.begin() + from, w.recmax.end(), kNegInf);
      std::fill(w.ready.begin(), w.ready.end(), 0.0);
      for (; next < w.order.size(); ++next) {
        const SortieWork& s = w.sorties[w.order[next]];
        if (s.launch >= from) break;
        w.ready[s.slot] = s.recover_t;
        if (s.recover >= from) w.recmax[s.recover] = std::max(w.recmax[s.recover], s.recover_t);
      }
      anchor_t = w.anchor_t[from];
      anchor_km = w.anchor_km[from];
    }
    auto launch = [&](const SortieWork& s, int p, SortieWork* out) {
      const double t = std::max(arr[p], w.ready[s.slot]);
      const double r = t + s.flight;
      w.ready[s.slot] = r;
      w.recmax[s.recover] = std::max(w.recmax[s.recover], r);
      if (out != nullptr) {
        out->launch_t = t;
        out->recover_t = r;
      }
    };
    for (int p = from; p <= P; ++p) {
      if (cand == nullptr) {
        w.anchor_t[p] = anchor_t;
        w.anchor_km[p] = anchor_km;
      }
      const double a = p == 0 ? 0.0 : anchor_t + (w.cum_km[p] - anchor_km) / ts;
      arr[p] = a;
      while (next < w.order.size() && w.sorties[w.order[next]].launch == p) {
        SortieWork& s = w.sorties[w.order[next]];
        launch(s, p, cand == nullptr ? &s : nullptr);
        ++next;
      }
      if (cand != nullptr && cand->launch == p) launch(*cand, p, nullptr);
      const double d = std::max(a, w.recmax[p]);
      dep[p] = d;
      if (d > a) {
        anchor_t = d;
        anchor_km = w.cum_km[p];
      }
    }
    return dep[P];
  };

  std::vector<int> last_recover(std::max(M, 1), 0);
  double base_completion = simulate(nullptr, 0, w.arr, w.dep);
  for (int k = 0; k < n_sorties; ++k) {
    SortieWork& s = w.sorties[k];
    w.base_ready = w.ready;
    const int lo = std::max(s.anchor_lo, last_recover[s.slot]);
    const int hi = std::max(s.anchor_hi, lo);

    w.cands.clear();
    double min_excess = std::numeric_limits<double>::infinity();
    const int reach = static_cast<int>(std::min<long long>(P, static_cast<long long>(hi) + hop_limit_));
    w.back_km.resize(reach - lo + 1);
    for (int R = lo; R <= reach; ++R) w.back_km[R - lo] = inst.euclidean(s.exit, w.nodes[R]);
    for (int L = lo; L <= hi; ++L) {
      const double out_km = inst.euclidean(w.nodes[L], s.entry);
      const int last = std::min(P, L + hop_limit_);
      for (int R = L; R <= last; ++R) {
        const double km = (out_km + w.back_km[R - lo]) + s.inner_km;
        const double f = km / ds;
        const double ex = std::max(0.0, f - tau);
        min_excess = std::min(min_excess, ex);
        w.cands.push_back(Candidate{L, R, f, ex});
      }
    }

    // Lexicographic choice: endurance excess, system completion, flight
    // time, launch position, recovery position.
    bool have = false;
    double best_completion = 0.0;
    Candidate best{};
    auto better = [&](double completion, const Candidate& c) {
      if (!have) return true;
      if (completion != best_completion) return completion < best_completion;
      if (c.flight != best.flight) return c.flight < best.flight;
      if (c.launch != best.launch) return c.launch < best.launch;
      return c.recover < best.recover;
    };
    for (const Candidate& c : w.cands) {
      if (c.excess != min_excess) continue;
      const double rec = std::max(w.arr[c.launch], w.base_ready[s.slot]) + c.flight;
      if (rec <= w.dep[c.recover] && better(base_completion, c)) {
        have = true;
        best_completion = base_completion;
        best = c;
      }
    }
    // Delaying candidates in order of their completion lower bound, so the
    // scan stops at the first bound above the incumbent.
    w.delayed.clear();
    for (const Candidate& c : w.cands) {
      if (c.excess != min_excess) continue;
      const double rec = std::max(w.arr[c.launch], w.base_ready[s.slot]) + c.flight;
      if (rec <= w.dep[c.recover]) continue;
      w.delayed.push_back({std::max(base_completion, rec + (w.cum_km[P] - w.cum_km[c.recover]) / ts), c});
    }
    auto after = [](const auto& x, const auto& y) {
      if (x.first != y.first) return x.first > y.first;
      if (x.second.flight != y.second.flight) return x.second.flight > y.second.flight;
      if (x.second.launch != y.second.launch) return x.second.launch > y.second.launch;
      return x.second.recover > y.second.recover;
    };
    std::make_heap(w.delayed.begin(), w.delayed.end(), after);
    for (auto end = w.delayed.end(); end != w.delayed.begin(); --end) {
      std::pop_heap(w.delayed.begin(), end, after);
      const auto& [bound, c] = *(end - 1);
      if (have && bound > best_completion) break;
      if (have && bound == best_completion && !better(bound, c)) continue;
      SortieWork trial = s;
      trial.launch = c.launch;
      trial.recover = c.recover;
      trial.flight = c.flight;
      const double completion = simulate(&trial, trial.launch, w.arr2, w.dep2);
      if (better(completion, c)) {
        have = true;
        best_completion = completion;
        best = c;
      }
    }

    s.launch = best.launch;
    s.recover = best.recover;
    s.flight = best.flight;
    last_recover[s.slot] = best.recover;
    auto pos = std::upper_bound(w.order.begin(), w.order.end(), k, [&](int a, int b) {
      const auto& sa = w.sorties[a];
      const auto& sb = w.sorties[b];
      return sa.launch != sb.launch ? sa.launch < sb.launch : a < b;
    });
    w.order.insert(pos, k);
    const double launch_t = std::max(w.arr[s.launch], w.base_ready[s.slot]);
    if (launch_t + s.flight <= w.dep[s.recover]) {
      // Recovered before the truck leaves: no truck time moves, and this is
      // the slot's latest sortie, so only its own times need recording.
      // Candidate runs clobbered `ready`; restore the base state.
      s.launch_t = launch_t;
      s.recover_t = launch_t + s.flight;
      w.ready = w.base_ready;
      w.ready[s.slot] = s.recover_t;
    } else {
      base_completion = simulate(nullptr, s.launch, w.arr, w.dep);
    }
  }

  SystemScore score;
  score.completion = base_completion;
  score.drone_max_flight.assign(M, 0.0);
  for (const SortieWork& s : w.sorties) {
    score.drone_max_flight[s.slot] = std::max(score.drone_max_flight[s.slot], s.flight);
  }

  if (plan != nullptr) {
    TruckRoute route;
    route.system = system;
    route.vehicle = truck_vid;
    route.nodes = w.nodes;
    route.arrival = w.arr;
    route.departure = w.dep;
    route.services = w.services;
    route.completion = base_completion;
    plan->trucks.push_back(std::move(route));
    for (const SortieWork& s : w.sorties) {
      Sortie out;
      out.drone = s.vehicle;
      out.system = system;
      out.launch_pos = s.launch;
      out.launch_node = w.nodes[s.launch];
      out.recovery_pos = s.recover;
      out.recovery_node = w.nodes[s.recover];
      out.tasks.assign(w.gseq.begin() + s.first_gene, w.gseq.begin() + s.last_gene + 1);
      out.flight_time = s.flight;
      out.launch_time = s.launch_t;
      out.recovery_time = s.recover_t;
      plan->sorties.push_back(std::move(out));
    }
  }
  return score;
}

namespace {

// SplitMix64 stream; cheap to seed, which matters because every system
// decode starts a fresh stream.
struct PathStream {
  std::uint64_t state;

  std::size_t operator()(std::size_t n) {
    state += 0x9e3779b97f4a7c15ULL;
    const std::uint64_t x = mix64(state);
    return static_cast<std::size_t>(x % n);
  }
};

PathPicker stream_picker(std::uint64_t decode_seed, int system) {
  return PathStream{derive_seed(decode_seed, {static_cast<std::uint64_t>(system)})};
}

}  // namespace

RoutePlan Decoder::decode(const Chromosome& c, std::uint64_t decode_seed) const {
  RoutePlan plan;
  for (int s = 0; s < fleet_.trucks; ++s) {
    run_system(c.seq, c.assign, s, stream_picker(decode_seed, s), &plan);
  }
  return plan;
}

Evaluation Decoder::evaluate(const Chromosome& c, std::uint64_t decode_seed) const {
  std::vector<SystemScore> scores;
  scores.reserve(fleet_.trucks);
  for (int s = 0; s < fleet_.trucks; ++s) {
    scores.push_back(run_system(c.seq, c.assign, s, stream_picker(decode_seed, s), nullptr));
  }
  return combine(scores, fleet_);
}

RoutePlan Decoder::decode(const Chromosome& c, const PathPicker& pick) const {
  RoutePlan plan;
  for (int s = 0; s < fleet_.trucks; ++s) run_system(c.seq, c.assign, s, pick, &plan);
  return plan;
}

Evaluation Decoder::evaluate(const Chromosome& c, const PathPicker& pick) const {
  std::vector<SystemScore> scores;
  scores.reserve(fleet_.trucks);
  for (int s = 0; s < fleet_.trucks; ++s) scores.push_back(run_system(c.seq, c.assign, s, pick, nullptr));
  return combine(scores, fleet_);
}

std::vector<std::size_t> Decoder::path_options(const Chromosome& c) const {
  std::vector<std::size_t> counts;
  PathPicker record = [&counts](std::size_t n) {
    counts.push_back(n);
    return std::size_t{0};
  };
  for (int s = 0; s < fleet_.trucks; ++s) run_system(c.seq, c.assign, s, record, nullptr);
  return counts;
}

SystemScore Decoder::score_system(std::span<const int> seq, std::span<const int> assign, int system,
                                  std::uint64_t decode_seed) const {
  return run_system(seq, assign, system, stream_picker(decode_seed, system), nullptr);
}

Evaluation combine(std::span<const SystemScore> systems, const FleetConfig& fleet) {
  Evaluation e;
  e.drone_max_flight.reserve(fleet.num_drones());
  for (const SystemScore& s : systems) {
    e.makespan = std::max(e.makespan, s.completion);
    for (double f : s.drone_max_flight) e.drone_max_flight.push_back(f);
  }
  for (double f : e.drone_max_flight) e.violation += std::max(0.0, f - fleet.tau);
  e.feasible = e.violation == 0.0;
  return e;
}

Evaluation evaluate(const RoutePlan& plan, const FleetConfig& fleet) {
  std::vector<SystemScore> scores(fleet.trucks);
  for (auto& s : scores) s.drone_max_flight.assign(fleet.drones_per_truck, 0.0);
  for (const TruckRoute& t : plan.trucks) scores.at(t.system).completion = t.completion;
  for (const Sortie& s : plan.sorties) {
    double& slot = scores.at(s.system).drone_max_flight.at((s.drone - 1) % (fleet.drones_per_truck + 1) - 1);
    slot = std::max(slot, s.flight_time);
  }
  return combine(scores, fleet);
}

double penalized_cost(const Evaluation& eval, double w_inf) {
  return eval.makespan + w_inf * eval.violation;
}

RoutePlan decode(const Chromosome& c, const Instance& instance, const MetricTables& metrics,
                 const FleetConfig& fleet, Rng& rng) {
  return Decoder(instance, metrics, fleet).decode(c, rng());
}

}  // namespace rpp
