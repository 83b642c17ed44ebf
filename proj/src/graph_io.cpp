#include "ccast/graph_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace ccast {
namespace {

[[noreturn]] void fail(const std::string& source, int line, const std::string& message) {
  throw InputError(source + ":" + std::to_string(line) + ": " + message);
}

double parse_energy(const std::string& token, const std::string& source, int line) {
  if (token == "inf" || token == "+inf" || token == "infinity") return kInfiniteEnergy;
  try {
    std::size_t used = 0;
    double value = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return value;
  } catch (const std::exception&) {
    fail(source, line, "expected a number, got '" + token + "'");
  }
}

long parse_integer(const std::string& token, const std::string& source, int line) {
  long value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    fail(source, line, "expected an integer, got '" + token + "'");
  return value;
}

}  // namespace

ConnectivityGraph parse_graph(std::istream& in, const std::string& source) {
  int sensor_count = -1;
  std::vector<double> batteries, sensor_energy;
  std::vector<char> node_seen;
  std::vector<GraphEdge> edges;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::string keyword;
    if (!(fields >> keyword)) continue;

    auto next = [&](const char* what) {
      std::string token;
      if (!(fields >> token)) fail(source, line_no, std::string("missing ") + what);
      return token;
    };
    auto expect_end = [&] {
      std::string extra;
      if (fields >> extra) fail(source, line_no, "unexpected trailing token '" + extra + "'");
    };

    if (keyword == "nodes") {
      if (sensor_count >= 0) fail(source, line_no, "duplicate 'nodes' header");
      sensor_count = static_cast<int>(parse_integer(next("sensor count"), source, line_no));
      expect_end();
      if (sensor_count < 1) fail(source, line_no, "need at least one sensor node");
      batteries.assign(sensor_count + 1, 0.0);
      sensor_energy.assign(sensor_count + 1, 0.0);
      node_seen.assign(sensor_count + 1, 0);
    } else if (keyword == "node") {
      if (sensor_count < 0) fail(source, line_no, "'node' before 'nodes' header");
      long id = parse_integer(next("node id"), source, line_no);
      if (id < 0 || id > sensor_count)
        fail(source, line_no, "node id " + std::to_string(id) + " outside 0.." +
                                  std::to_string(sensor_count));
      if (node_seen[id]) fail(source, line_no, "duplicate node " + std::to_string(id));
      node_seen[id] = 1;
      batteries[id] = parse_energy(next("battery"), source, line_no);
      sensor_energy[id] = parse_energy(next("sensor energy"), source, line_no);
      expect_end();
      if (id == kSink && batteries[id] != kInfiniteEnergy)
        fail(source, line_no, "node 0 is the sink and must have battery 'inf'");
      if (id != kSink && batteries[id] == kInfiniteEnergy)
        fail(source, line_no, "only the sink may have an infinite battery");
    } else if (keyword == "edge") {
      if (sensor_count < 0) fail(source, line_no, "'edge' before 'nodes' header");
      GraphEdge e;
      e.u = static_cast<NodeId>(parse_integer(next("edge endpoint"), source, line_no));
      e.v = static_cast<NodeId>(parse_integer(next("edge endpoint"), source, line_no));
      e.cost_mj = parse_energy(next("edge cost"), source, line_no);
      expect_end();
      if (e.u < 0 || e.u > sensor_count || e.v < 0 || e.v > sensor_count)
        fail(source, line_no, "edge endpoint outside 0.." + std::to_string(sensor_count));
      edges.push_back(e);
    } else {
      fail(source, line_no, "unknown keyword '" + keyword + "'");
    }
  }

  if (sensor_count < 0) throw InputError(source + ": missing 'nodes' header");
  for (int id = 0; id <= sensor_count; ++id)
    if (!node_seen[id]) throw InputError(source + ": missing 'node' line for id " + std::to_string(id));

  try {
    return ConnectivityGraph(sensor_count, std::move(batteries), std::move(sensor_energy),
                             std::move(edges));
  } catch (const InputError& e) {
    throw InputError(source + ": " + e.what());
  }
}

ConnectivityGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open graph file '" + path + "'");
  return parse_graph(in, path);
}

void write_graph(std::ostream& out, const ConnectivityGraph& graph) {
  out << "nodes " << graph.sensor_count() << "\n";
  for (NodeId u = 0; u <= graph.sensor_count(); ++u) {
    out << "node " << u << " ";
    if (graph.battery_mj(u) == kInfiniteEnergy)
      out << "inf";
    else
      out << graph.battery_mj(u);
    out << " " << graph.sensor_energy_mj(u) << "\n";
  }
  for (const auto& e : graph.edges())
    out << "edge " << e.u << " " << e.v << " " << e.cost_mj << "\n";
}

void write_tree_csv(std::ostream& out, const CollectionTree& tree) {
  for (NodeId u = 1; u <= tree.sensor_count(); ++u)
    out << "parent_of," << u << "," << tree.parent(u) << "," << tree.depth(u) << "\n";
}

CollectionTree parse_tree_csv(std::istream& in, const ConnectivityGraph& graph) {
  std::vector<NodeId> parent(graph.node_count(), kSink);
  std::vector<char> seen(graph.node_count(), 0);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string tag, u_str, v_str, depth_str;
    if (!std::getline(fields, tag, ',') || tag != "parent_of" || !std::getline(fields, u_str, ',') ||
        !std::getline(fields, v_str, ',') || !std::getline(fields, depth_str))
      throw InputError("tree csv line " + std::to_string(line_no) + ": expected parent_of,u,v,depth");
    long u = parse_integer(u_str, "tree csv", line_no);
    long v = parse_integer(v_str, "tree csv", line_no);
    if (u < 1 || u >= graph.node_count() || v < 0 || v >= graph.node_count())
      throw InputError("tree csv line " + std::to_string(line_no) + ": node id out of range");
    if (seen[u]) throw InputError("tree csv line " + std::to_string(line_no) + ": duplicate node");
    seen[u] = 1;
    parent[u] = static_cast<NodeId>(v);
  }
  for (NodeId u = 1; u < graph.node_count(); ++u)
    if (!seen[u]) throw InputError("tree csv: missing parent for node " + std::to_string(u));
  return CollectionTree(graph, std::move(parent));
}

}  // namespace ccast
