#include "rpp_cli/cli.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "rpp/evolution.hpp"
#include "rpp/instance.hpp"
#include "rpp/metrics.hpp"
#include "rpp/oracle.hpp"
#include "rpp/plan_io.hpp"

namespace fs = std::filesystem;

namespace rpp::cli {
namespace {

std::string num(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string delta_text(const std::optional<int>& delta) { return delta ? std::to_string(*delta) : "unbounded"; }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, sep)) parts.push_back(trim(part));
  return parts;
}

int to_int(const std::string& s) {
  int v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument("not an integer: '" + s + "'");
  }
  return v;
}

double to_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  return v;
}

// Options shared by solve and benchmark.
struct SolverOptions {
  GaConfig ga;
  std::optional<int> delta;
  bool no_timing = false;

  void add_to(CLI::App* app) {
    app->add_option("--delta", delta, "Hop window between launch and recovery (omit for unbounded)")
        ->check(CLI::PositiveNumber);
    app->add_option("--pop-min", ga.pop_min, "Population lower bound P_L")->capture_default_str();
    app->add_option("--pop-max", ga.pop_max, "Population upper bound P_H")->capture_default_str();
    app->add_option("--generations", ga.generations, "Generations G")->capture_default_str();
    app->add_option("--elite-ratio", ga.elite_ratio, "Fitness base n_E/n_P")->capture_default_str();
    app->add_option("--stagnation", ga.stagnation_window, "Stagnation window G_m")->capture_default_str();
    app->add_option("--p-targeted", ga.p_targeted, "Seeded share of the initial population")->capture_default_str();
    app->add_option("--p-mutation", ga.p_mutation, "Mutation probability p_m")->capture_default_str();
    app->add_option("--p-mutation-boost", ga.p_mutation_boost, "Mutation probability under stagnation")
        ->capture_default_str();
    app->add_option("--w-inf", ga.w_inf_initial, "Initial infeasibility weight")->capture_default_str();
    app->add_option("--survivor-elite", ga.survivor_elite, "Force-kept share of P_L")->capture_default_str();
    app->add_option("--refine-fraction", ga.refine_fraction, "Offspring share refined by local search")
        ->capture_default_str();
    app->add_option("--ls-steps", ga.ls.ls_steps, "Local-search steps per refinement")->capture_default_str();
    app->add_option("--or-opt-block", ga.ls.or_opt_block, "Or-opt block bound b")->capture_default_str();
    app->add_option("--p-ruin", ga.ls.p_ruin, "Ruin share of tasks")->capture_default_str();
    app->add_option("--polish-budget", ga.polish_budget, "Decodes spent on final path-choice polish")
        ->capture_default_str();
    app->add_flag("--no-timing", no_timing, "Write zero for wall-clock columns");
  }

  ConfigEcho echo() const {
    return {{"delta", delta_text(delta)},
            {"pop_min", std::to_string(ga.pop_min)},
            {"pop_max", std::to_string(ga.pop_max)},
            {"generations", std::to_string(ga.generations)},
            {"elite_ratio", num(ga.elite_ratio)},
            {"stagnation_window", std::to_string(ga.stagnation_window)},
            {"p_targeted", num(ga.p_targeted)},
            {"p_mutation", num(ga.p_mutation)},
            {"p_mutation_boost", num(ga.p_mutation_boost)},
            {"w_inf_initial", num(ga.w_inf_initial)},
            {"w_inf_range", num(ga.w_inf_min) + ".." + num(ga.w_inf_max)},
            {"survivor_elite", num(ga.survivor_elite)},
            {"refine_fraction", num(ga.refine_fraction)},
            {"ls_steps", std::to_string(ga.ls.ls_steps)},
            {"or_opt_block", std::to_string(ga.ls.or_opt_block)},
            {"p_ruin", num(ga.ls.p_ruin)},
            {"polish_budget", std::to_string(ga.polish_budget)}};
  }
};

void write_echo(std::ostream& out, const ConfigEcho& echo) {
  for (const auto& [k, v] : echo) out << "# " << k << '=' << v << '\n';
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  return f;
}

// ---- generate ----

struct GenerateArgs {
  int nodes = 50;
  int edges = 100;
  int required = 15;
  int count = 5;
  std::uint64_t seed = 1;
  double grid = 10.0;
  std::string out_dir = ".";
};

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  for (int i = 1; i <= a.count; ++i) {
    GeneratorConfig cfg;
    cfg.n_nodes = a.nodes;
    cfg.n_edges = a.edges;
    cfg.n_required = a.required;
    cfg.grid_size = a.grid;
    cfg.seed = derive_seed(a.seed, {static_cast<std::uint64_t>(i)});
    Instance inst = generate_instance(cfg);
    const std::string stem = "N" + std::to_string(a.nodes) + "E" + std::to_string(a.edges) + "R" +
                             std::to_string(a.required) + "_s" + std::to_string(a.seed) + "_" + std::to_string(i);
    inst.name = stem;
    const fs::path path = fs::path(a.out_dir) / (stem + ".rpp");
    fs::create_directories(a.out_dir);
    save_instance(inst, path);
    out << path.string() << '\n';
  }
  return 0;
}

// ---- solve ----

struct SolveArgs {
  std::string instance;
  int trucks = 1;
  int drones = 1;
  double tau = 1.0;
  std::optional<double> beta;
  SolverOptions solver;
  std::string out_dir = ".";
  bool verbose = false;
};

std::string class_of(const std::string& name) {
  const auto pos = name.rfind("_s");
  return pos == std::string::npos ? name : name.substr(0, pos);
}

int cmd_solve(SolveArgs& a, std::ostream& out, std::ostream& err) {
  const Instance inst = load_instance(a.instance);
  const double tau = a.beta ? tau_from_beta(inst, *a.beta) : a.tau;
  FleetConfig fleet{a.trucks, a.drones, a.solver.delta, tau};
  fleet.validate();
  const MetricTables metrics = MetricTables::build(inst);

  ConfigEcho echo{{"instance", inst.name},
                  {"trucks", std::to_string(a.trucks)},
                  {"drones", std::to_string(a.drones)},
                  {"tau_h", num(tau)}};
  if (a.beta) echo.emplace_back("beta", num(*a.beta));
  echo.emplace_back("seed", std::to_string(a.solver.ga.seed));
  for (auto& kv : a.solver.echo()) echo.push_back(kv);

  TraceCallback progress;
  if (a.verbose) {
    progress = [&err](const TraceRow& r) {
      err << "gen " << r.generation << " best_cost_min=" << num(r.best_cost * 60.0) << " best_feasible_min="
          << (r.best_feasible_makespan ? num(*r.best_feasible_makespan * 60.0) : std::string("-")) << '\n';
    };
  }
  SolveResult res = solve(inst, metrics, fleet, a.solver.ga, progress);
  if (a.solver.no_timing) {
    for (TraceRow& r : res.trace) r.elapsed_s = 0.0;
  }

  const std::string stem = fs::path(a.instance).stem().string() + "_K" + std::to_string(a.trucks) + "M" +
                           std::to_string(a.drones) + "_s" + std::to_string(a.solver.ga.seed);
  const fs::path dir(a.out_dir);
  {
    std::ofstream f = open_out(dir / (stem + ".plan.json"));
    write_plan_json(f, res.plan, res.eval, inst, echo);
  }
  {
    std::ofstream f = open_out(dir / (stem + ".trace.csv"));
    write_trace_csv(f, res.trace, echo);
  }
  {
    std::ofstream f = open_out(dir / (stem + ".summary.csv"));
    write_echo(f, echo);
    f << "instance,trucks,drones,tau_h,delta,seed,makespan_min,feasible,violation_min\n"
      << inst.name << ',' << a.trucks << ',' << a.drones << ',' << num(tau) << ',' << delta_text(fleet.delta)
      << ',' << a.solver.ga.seed << ',' << num(res.eval.makespan * 60.0) << ',' << (res.feasible ? 1 : 0) << ','
      << num(res.eval.violation * 60.0) << '\n';
  }
  out << "makespan_min=" << num(res.eval.makespan * 60.0) << " feasible=" << (res.feasible ? "yes" : "no")
      << " violation_min=" << num(res.eval.violation * 60.0) << " outputs=" << (dir / stem).string() << ".*\n";
  return 0;
}

// ---- benchmark ----

struct BenchmarkArgs {
  std::string instances;
  std::string grid = "K=1;M=1";
  std::string tau_list = "1.0";
  std::string seeds = "1";
  SolverOptions solver;
  std::string out;
  int jobs = 1;
};

struct Cell {
  std::size_t instance;
  int trucks;
  int drones;
  double tau;
  int seed;
  double makespan = 0.0;
  double violation = 0.0;
  bool feasible = false;
  double runtime_s = 0.0;
  std::string error;
};

int cmd_benchmark(BenchmarkArgs& a, std::ostream& out, std::ostream& err) {
  const std::vector<std::string> files = expand_glob(a.instances);
  if (files.empty()) throw std::runtime_error("no instance files match '" + a.instances + "'");
  const FleetGrid grid = parse_grid(a.grid);
  const std::vector<double> taus = parse_double_list(a.tau_list);
  const std::vector<int> seeds = parse_int_list(a.seeds);

  std::vector<Instance> instances;
  std::vector<MetricTables> metrics;
  for (const std::string& f : files) {
    instances.push_back(load_instance(f));
    metrics.push_back(MetricTables::build(instances.back()));
  }

  std::vector<Cell> cells;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    for (int k : grid.trucks) {
      for (int m : grid.drones) {
        for (double tau : taus) {
          for (int s : seeds) cells.push_back(Cell{i, k, m, tau, s, 0.0, 0.0, false, 0.0, {}});
        }
      }
    }
  }

  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t c = next++; c < cells.size(); c = next++) {
      Cell& cell = cells[c];
      try {
        FleetConfig fleet{cell.trucks, cell.drones, a.solver.delta, cell.tau};
        GaConfig ga = a.solver.ga;
        ga.seed = static_cast<std::uint64_t>(cell.seed);
        const auto t0 = std::chrono::steady_clock::now();
        const SolveResult r = solve(instances[cell.instance], metrics[cell.instance], fleet, ga);
        cell.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        cell.makespan = r.eval.makespan;
        cell.violation = r.eval.violation;
        cell.feasible = r.feasible;
      } catch (const std::exception& e) {
        cell.error = e.what();
      }
      std::lock_guard lock(log_mutex);
      err << "[" << c + 1 << "/" << cells.size() << "] " << instances[cell.instance].name << " K=" << cell.trucks
          << " M=" << cell.drones << " tau=" << num(cell.tau) << " seed=" << cell.seed << '\n';
    }
  };
  std::vector<std::thread> pool;
  for (int j = 1; j < std::max(1, a.jobs); ++j) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  for (const Cell& cell : cells) {
    if (!cell.error.empty()) throw std::runtime_error(instances[cell.instance].name + ": " + cell.error);
  }

  std::ofstream file;
  std::ostream* os = &out;
  if (!a.out.empty()) {
    file = open_out(a.out);
    os = &file;
  }
  ConfigEcho echo{{"instances", a.instances}, {"grid", a.grid}, {"tau_list", a.tau_list}, {"seeds", a.seeds}};
  for (auto& kv : a.solver.echo()) echo.push_back(kv);
  write_echo(*os, echo);
  *os << "instance,trucks,drones,tau_h,delta,seed,makespan_min,feasible,violation_min,runtime_min\n";
  auto runtime = [&](double s) { return a.solver.no_timing ? std::string("0") : num(s / 60.0); };
  for (const Cell& c : cells) {
    *os << instances[c.instance].name << ',' << c.trucks << ',' << c.drones << ',' << num(c.tau) << ','
        << delta_text(a.solver.delta) << ',' << c.seed << ',' << num(c.makespan * 60.0) << ','
        << (c.feasible ? 1 : 0) << ',' << num(c.violation * 60.0) << ',' << runtime(c.runtime_s) << '\n';
  }

  // Class means over instances and seeds; `feasible` becomes the feasible share.
  struct Agg {
    double makespan = 0.0, violation = 0.0, runtime = 0.0, feasible = 0.0;
    int n = 0;
  };
  std::vector<std::string> order;
  std::map<std::string, Agg> aggs;
  for (const Cell& c : cells) {
    const std::string key = class_of(instances[c.instance].name) + ',' + std::to_string(c.trucks) + ',' +
                            std::to_string(c.drones) + ',' + num(c.tau) + ',' + delta_text(a.solver.delta);
    auto [it, fresh] = aggs.try_emplace(key);
    if (fresh) order.push_back(key);
    Agg& g = it->second;
    g.makespan += c.makespan;
    g.violation += c.violation;
    g.runtime += c.runtime_s;
    g.feasible += c.feasible ? 1.0 : 0.0;
    ++g.n;
  }
  for (const std::string& key : order) {
    const Agg& g = aggs[key];
    *os << key << ",mean," << num(g.makespan / g.n * 60.0) << ',' << num(g.feasible / g.n) << ','
        << num(g.violation / g.n * 60.0) << ',' << runtime(g.runtime / g.n) << '\n';
  }
  return 0;
}

// ---- trace-plot-data ----

int cmd_trace_plot_data(const std::string& trace_path, const std::string& out_path, std::ostream& out) {
  std::ifstream in(trace_path);
  if (!in) throw std::runtime_error("cannot read " + trace_path);
  const RunTrace trace = read_trace_csv(in);
  std::ofstream file;
  std::ostream* os = &out;
  if (!out_path.empty()) {
    file = open_out(out_path);
    os = &file;
  }
  *os << "generation,best_makespan_min\n";
  for (const TraceRow& r : trace) {
    if (r.best_feasible_makespan) *os << r.generation << ',' << num(*r.best_feasible_makespan * 60.0) << '\n';
  }
  return 0;
}

// ---- oracle ----

struct OracleArgs {
  std::string instance;
  int trucks = 1;
  int drones = 0;
  double tau = 1.0;
  std::optional<double> beta;
  std::optional<int> delta;
  double max_plans = 1e7;
  std::string plan_out;
};

int cmd_oracle(const OracleArgs& a, std::ostream& out) {
  const Instance inst = load_instance(a.instance);
  const double tau = a.beta ? tau_from_beta(inst, *a.beta) : a.tau;
  const FleetConfig fleet{a.trucks, a.drones, a.delta, tau};
  const MetricTables metrics = MetricTables::build(inst);
  const OracleResult r = exhaustive_solve(inst, metrics, fleet, a.max_plans);
  if (!a.plan_out.empty()) {
    std::ofstream f = open_out(a.plan_out);
    write_plan_json(f, r.plan, r.eval, inst,
                    {{"instance", inst.name},
                     {"trucks", std::to_string(a.trucks)},
                     {"drones", std::to_string(a.drones)},
                     {"tau_h", num(tau)},
                     {"delta", delta_text(a.delta)},
                     {"solver", "oracle"}});
  }
  out << "makespan_min=" << num(r.eval.makespan * 60.0) << " feasible=" << (r.feasible ? "yes" : "no")
      << " violation_min=" << num(r.eval.violation * 60.0) << " plans=" << r.plans_decoded
      << " chromosome=" << to_string(r.chromosome) << '\n';
  return 0;
}

void add_fleet_options(CLI::App* app, int& trucks, int& drones, double& tau, std::optional<double>& beta) {
  app->add_option("--trucks,-K", trucks, "Truck systems K")->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--drones,-M", drones, "Drones per truck M")->capture_default_str()->check(CLI::NonNegativeNumber);
  auto* tau_opt = app->add_option("--tau", tau, "Drone endurance, hours")->capture_default_str();
  auto* beta_opt = app->add_option("--beta", beta, "Endurance as a multiple of the mean node distance");
  tau_opt->excludes(beta_opt);
}

}  // namespace

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const std::string& part : split(text, ',')) {
    if (part.empty()) throw std::invalid_argument("empty entry in list '" + text + "'");
    const auto dots = part.find("..");
    if (dots == std::string::npos) {
      out.push_back(to_int(part));
      continue;
    }
    const int lo = to_int(part.substr(0, dots));
    const int hi = to_int(part.substr(dots + 2));
    if (hi < lo) throw std::invalid_argument("empty range '" + part + "'");
    for (int v = lo; v <= hi; ++v) out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty list '" + text + "'");
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const std::string& part : split(text, ',')) {
    if (part.empty()) throw std::invalid_argument("empty entry in list '" + text + "'");
    out.push_back(to_double(part));
  }
  if (out.empty()) throw std::invalid_argument("empty list '" + text + "'");
  return out;
}

FleetGrid parse_grid(const std::string& text) {
  FleetGrid grid{{1}, {1}};
  for (const std::string& part : split(text, ';')) {
    if (part.empty()) continue;
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("grid entry needs KEY=LIST: '" + part + "'");
    const std::string key = trim(part.substr(0, eq));
    std::vector<int> values = parse_int_list(part.substr(eq + 1));
    if (key == "K") {
      grid.trucks = std::move(values);
    } else if (key == "M") {
      grid.drones = std::move(values);
    } else {
      throw std::invalid_argument("unknown grid key '" + key + "'");
    }
  }
  return grid;
}

std::vector<std::string> expand_glob(const std::string& pattern) {
  const fs::path p(pattern);
  if (pattern.find_first_of("*?[") == std::string::npos) {
    return fs::is_regular_file(p) ? std::vector<std::string>{pattern} : std::vector<std::string>{};
  }
  const fs::path dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
  const std::string name = p.filename().string();
  std::vector<std::string> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    if (fnmatch(name.c_str(), entry.path().filename().c_str(), 0) == 0) out.push_back(entry.path().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rural postman routing with truck-drone fleets"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file with option defaults");

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Generate random instances");
  generate->add_option("--nodes", gen.nodes, "Node count N")->capture_default_str();
  generate->add_option("--edges", gen.edges, "Edge count E")->capture_default_str();
  generate->add_option("--required", gen.required, "Required edges R")->capture_default_str();
  generate->add_option("--count", gen.count, "Instances to write")->capture_default_str()->check(CLI::NonNegativeNumber);
  generate->add_option("--seed", gen.seed, "Master seed")->capture_default_str();
  generate->add_option("--grid", gen.grid, "Side of the square area, km")->capture_default_str();
  generate->add_option("--out", gen.out_dir, "Output directory")->required();

  SolveArgs sol;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one instance with the hybrid genetic algorithm");
  solve_cmd->add_option("--instance", sol.instance, "Instance file")->required()->check(CLI::ExistingFile);
  add_fleet_options(solve_cmd, sol.trucks, sol.drones, sol.tau, sol.beta);
  solve_cmd->add_option("--seed", sol.solver.ga.seed, "Master seed")->capture_default_str();
  sol.solver.add_to(solve_cmd);
  solve_cmd->add_option("--out-dir", sol.out_dir, "Directory for plan, trace and summary")->capture_default_str();
  solve_cmd->add_flag("--verbose,-v", sol.verbose, "Print progress per generation");

  BenchmarkArgs bench;
  auto* bench_cmd = app.add_subcommand("benchmark", "Run a fleet/endurance grid over instance files");
  bench_cmd->add_option("--instances", bench.instances, "Instance file glob")->required();
  bench_cmd->add_option("--grid", bench.grid, "Fleet grid, e.g. K=1,2,3;M=1,2,3")->capture_default_str();
  bench_cmd->add_option("--tau-list", bench.tau_list, "Endurance values, hours")->capture_default_str();
  bench_cmd->add_option("--seeds", bench.seeds, "Seeds, e.g. 1..5")->capture_default_str();
  bench.solver.add_to(bench_cmd);
  bench_cmd->add_option("--out", bench.out, "Output CSV (default stdout)");
  bench_cmd->add_option("--jobs", bench.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);

  std::string trace_in;
  std::string trace_out;
  auto* plot_cmd = app.add_subcommand("trace-plot-data", "Extract (generation, best makespan) pairs from a trace");
  plot_cmd->add_option("--trace", trace_in, "Trace CSV written by solve")->required();
  plot_cmd->add_option("--out", trace_out, "Output CSV (default stdout)");

  OracleArgs orc;
  auto* oracle_cmd = app.add_subcommand("oracle", "Exhaustive optimum for tiny instances");
  oracle_cmd->group("");
  oracle_cmd->add_option("--instance", orc.instance, "Instance file")->required()->check(CLI::ExistingFile);
  add_fleet_options(oracle_cmd, orc.trucks, orc.drones, orc.tau, orc.beta);
  oracle_cmd->add_option("--delta", orc.delta, "Hop window (omit for unbounded)")->check(CLI::PositiveNumber);
  oracle_cmd->add_option("--max-plans", orc.max_plans, "Refuse larger search spaces")->capture_default_str();
  oracle_cmd->add_option("--plan", orc.plan_out, "Write the optimal plan as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*generate) return cmd_generate(gen, out);
    if (*solve_cmd) return cmd_solve(sol, out, err);
    if (*bench_cmd) return cmd_benchmark(bench, out, err);
    if (*plot_cmd) return cmd_trace_plot_data(trace_in, trace_out, out);
    if (*oracle_cmd) return cmd_oracle(orc, out);
  } catch (const InstanceError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace rpp::cli
