#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rpp::cli {

// Entry point of the rppmtd tool. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// "1..5" (inclusive range) or "1,2,5".
std::vector<int> parse_int_list(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);

struct FleetGrid {
  std::vector<int> trucks;
  std::vector<int> drones;
};

// "K=1,2,3;M=1,2,3"; either key may be omitted (defaults K=1, M=1).
FleetGrid parse_grid(const std::string& text);

// Files in the glob's directory whose names match its last component.
std::vector<std::string> expand_glob(const std::string& pattern);

}  // namespace rpp::cli
