#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>

#include "rpp/instance.hpp"

namespace rpp {
namespace {

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next non-empty line split into whitespace tokens; `rest` keeps the raw
  // text after the keyword for free-form fields.
  bool next(std::vector<std::string>& tokens, std::string& rest) {
    std::string text;
    while (std::getline(in_, text)) {
      ++line_;
      if (!text.empty() && text.back() == '\r') text.pop_back();
      if (text.find_first_not_of(" \t") == std::string::npos) continue;
      tokens.clear();
      std::istringstream ss(text);
      for (std::string tok; ss >> tok;) tokens.push_back(tok);
      const auto kw_end = text.find(tokens.front()) + tokens.front().size();
      const auto rest_begin = text.find_first_not_of(" \t", kw_end);
      rest = rest_begin == std::string::npos ? std::string() : text.substr(rest_begin);
      return true;
    }
    return false;
  }

  int line() const { return line_; }

 private:
  std::istream& in_;
  int line_ = 0;
};

template <typename T>
T parse_number(const std::string& tok, int line) {
  T value{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw InstanceError("cannot parse number '" + tok + "'", line);
  }
  return value;
}

void expect(const std::vector<std::string>& tokens, std::string_view keyword, std::size_t count,
            int line) {
  if (tokens.empty() || tokens.front() != keyword) {
    throw InstanceError("expected '" + std::string(keyword) + "'", line);
  }
  if (tokens.size() != count) {
    throw InstanceError("'" + std::string(keyword) + "' takes " + std::to_string(count - 1) +
                            " field(s)",
                        line);
  }
}

}  // namespace

Instance read_instance(std::istream& in) {
  LineReader reader(in);
  std::vector<std::string> tok;
  std::string rest;
  auto need = [&](std::string_view what) {
    if (!reader.next(tok, rest)) {
      throw InstanceError("unexpected end of file, expected '" + std::string(what) + "'",
                          reader.line() + 1);
    }
  };

  need("RPPMTD");
  expect(tok, "RPPMTD", 2, reader.line());
  if (tok[1] != "1") throw InstanceError("unsupported format version " + tok[1], reader.line());

  Instance inst;
  need("N");
  expect(tok, "N", 2, reader.line());
  const int n = parse_number<int>(tok[1], reader.line());
  if (n < 2) throw InstanceError("N must be at least 2", reader.line());
  for (int i = 0; i < n; ++i) {
    need("node");
    expect(tok, "node", 4, reader.line());
    Node node{parse_number<int>(tok[1], reader.line()), parse_number<double>(tok[2], reader.line()),
              parse_number<double>(tok[3], reader.line())};
    if (node.id != i) {
      throw InstanceError("node ids must be contiguous, expected " + std::to_string(i),
                          reader.line());
    }
    inst.nodes.push_back(node);
  }

  need("E");
  expect(tok, "E", 2, reader.line());
  const int m = parse_number<int>(tok[1], reader.line());
  if (m < 1) throw InstanceError("E must be at least 1", reader.line());
  for (int i = 0; i < m; ++i) {
    need("edge");
    expect(tok, "edge", 5, reader.line());
    Edge e{parse_number<int>(tok[1], reader.line()), parse_number<int>(tok[2], reader.line()),
           parse_number<double>(tok[3], reader.line()), false};
    const int flag = parse_number<int>(tok[4], reader.line());
    if (flag != 0 && flag != 1) throw InstanceError("required flag must be 0 or 1", reader.line());
    e.required = flag == 1;
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n) {
      throw InstanceError("edge references node " + std::to_string(e.u < 0 || e.u >= n ? e.u : e.v) +
                              " but N = " + std::to_string(n),
                          reader.line());
    }
    if (e.u == e.v) throw InstanceError("self-loop edge", reader.line());
    if (!(e.length > 0.0)) throw InstanceError("edge length must be positive", reader.line());
    if (e.required) inst.required_ids.push_back(i);
    inst.edges.push_back(e);
  }

  need("depot");
  expect(tok, "depot", 2, reader.line());
  inst.depot = parse_number<int>(tok[1], reader.line());
  if (inst.depot != 0) throw InstanceError("depot must be node 0", reader.line());

  need("speeds");
  expect(tok, "speeds", 3, reader.line());
  inst.truck_speed = parse_number<double>(tok[1], reader.line());
  inst.drone_speed = parse_number<double>(tok[2], reader.line());

  need("tau");
  expect(tok, "tau", 2, reader.line());
  inst.tau = parse_number<double>(tok[1], reader.line());

  need("name");
  if (tok.front() != "name") throw InstanceError("expected 'name'", reader.line());
  inst.name = rest;
  const int name_line = reader.line();

  if (reader.next(tok, rest)) throw InstanceError("trailing content after 'name'", reader.line());

  try {
    validate(inst);
  } catch (const InstanceError& err) {
    throw InstanceError(err.what(), name_line);
  }
  return inst;
}

void write_instance(const Instance& inst, std::ostream& out) {
  out << "RPPMTD 1\n";
  out << "N " << inst.num_nodes() << '\n';
  for (const Node& node : inst.nodes) {
    out << "node " << node.id << ' ' << format_double(node.x) << ' ' << format_double(node.y)
        << '\n';
  }
  out << "E " << inst.num_edges() << '\n';
  for (const Edge& e : inst.edges) {
    out << "edge " << e.u << ' ' << e.v << ' ' << format_double(e.length) << ' '
        << (e.required ? 1 : 0) << '\n';
  }
  out << "depot " << inst.depot << '\n';
  out << "speeds " << format_double(inst.truck_speed) << ' ' << format_double(inst.drone_speed)
      << '\n';
  out << "tau " << format_double(inst.tau) << '\n';
  out << "name " << inst.name << '\n';
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InstanceError("cannot open " + path.string());
  return read_instance(in);
}

void save_instance(const Instance& inst, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InstanceError("cannot write " + path.string());
  write_instance(inst, out);
  if (!out) throw InstanceError("write failed for " + path.string());
}

}  // namespace rpp
