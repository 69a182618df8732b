#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "rpp/evolution.hpp"

namespace rpp {
namespace {

constexpr const char* kHeader =
    "generation,best_cost_min,best_feasible_makespan_min,mean_fitness_min,p_m,w_inf,elapsed_s";

std::string fmt(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& field, int line) {
  double x = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), x);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
    throw std::runtime_error("trace line " + std::to_string(line) + ": bad number '" + field + "'");
  }
  return x;
}

}  // namespace

void write_trace_csv(std::ostream& out, const RunTrace& trace,
                     const std::vector<std::pair<std::string, std::string>>& config_echo) {
  for (const auto& [key, value] : config_echo) out << "# " << key << '=' << value << '\n';
  out << kHeader << '\n';
  for (const TraceRow& r : trace) {
    char elapsed[32];
    std::snprintf(elapsed, sizeof elapsed, "%.3f", r.elapsed_s);
    out << r.generation << ',' << fmt(r.best_cost * 60.0) << ','
        << (r.best_feasible_makespan ? fmt(*r.best_feasible_makespan * 60.0) : std::string()) << ','
        << fmt(r.mean_fitness * 60.0) << ',' << fmt(r.p_m) << ',' << fmt(r.w_inf) << ',' << elapsed << '\n';
  }
}

RunTrace read_trace_csv(std::istream& in) {
  RunTrace trace;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != kHeader) throw std::runtime_error("trace line " + std::to_string(line_no) + ": unexpected header");
      header_seen = true;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (line.back() == ',') f.emplace_back();
    if (f.size() != 7) throw std::runtime_error("trace line " + std::to_string(line_no) + ": expected 7 fields");
    TraceRow r;
    r.generation = static_cast<int>(parse_double(f[0], line_no));
    r.best_cost = parse_double(f[1], line_no) / 60.0;
    if (!f[2].empty()) r.best_feasible_makespan = parse_double(f[2], line_no) / 60.0;
    r.mean_fitness = parse_double(f[3], line_no) / 60.0;
    r.p_m = parse_double(f[4], line_no);
    r.w_inf = parse_double(f[5], line_no);
    r.elapsed_s = parse_double(f[6], line_no);
    trace.push_back(r);
  }
  if (trace.empty()) throw std::runtime_error("trace has no rows");
  return trace;
}

}  // namespace rpp
