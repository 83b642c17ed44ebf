#include "ccast/model.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

namespace ccast {

std::vector<PowerLevel> EnergyParams::default_power_levels(double max_range_m, int levels) {
  const double max_energy = 1.287;
  const double min_energy = 1.287 * (10.0 / 18.33);
  std::vector<PowerLevel> table;
  table.reserve(levels);
  for (int i = 0; i < levels; ++i) {
    PowerLevel level;
    level.range_m = max_range_m * static_cast<double>(i + 1) / levels;
    level.tx_energy_mj =
        levels == 1 ? max_energy
                    : min_energy + (max_energy - min_energy) * static_cast<double>(i) / (levels - 1);
    table.push_back(level);
  }
  return table;
}

EnergyParams EnergyParams::defaults(double max_range_m) {
  EnergyParams p;
  p.power_levels = default_power_levels(max_range_m);
  return p;
}

double EnergyParams::c_avg() const {
  if (avg_tx_energy_mj > 0.0) return avg_tx_energy_mj;
  double sum = 0.0;
  for (const auto& level : power_levels) sum += level.tx_energy_mj;
  return sum / static_cast<double>(power_levels.size());
}

void EnergyParams::validate() const {
  if (rx_energy_mj < 0.0 || !std::isfinite(rx_energy_mj))
    throw InputError("e_r must be finite and >= 0");
  if (data_unit_bytes < 1) throw InputError("data unit size l must be >= 1 byte");
  if (packet_capacity_bytes < data_unit_bytes)
    throw InputError("packet capacity beta must be >= data unit size l");
  if (avg_tx_energy_mj == 0.0 && power_levels.empty())
    throw InputError("C_avg must be set explicitly or derivable from a power-level table");
  if (avg_tx_energy_mj < 0.0) throw InputError("C_avg must be > 0");
  double prev_range = 0.0, prev_energy = 0.0;
  for (const auto& level : power_levels) {
    if (level.range_m <= prev_range || level.tx_energy_mj <= prev_energy)
      throw InputError("power levels must be strictly increasing in range and energy");
    prev_range = level.range_m;
    prev_energy = level.tx_energy_mj;
  }
}

ConnectivityGraph::ConnectivityGraph(int sensor_count, std::vector<double> batteries_mj,
                                     std::vector<double> sensor_energy_mj,
                                     std::vector<GraphEdge> edges)
    : ConnectivityGraph(Unchecked{}, sensor_count, std::move(batteries_mj),
                        std::move(sensor_energy_mj), std::move(edges),
                        /*require_connected=*/true) {}

ConnectivityGraph ConnectivityGraph::allow_disconnected(int sensor_count,
                                                        std::vector<double> batteries_mj,
                                                        std::vector<double> sensor_energy_mj,
                                                        std::vector<GraphEdge> edges) {
  return ConnectivityGraph(Unchecked{}, sensor_count, std::move(batteries_mj),
                           std::move(sensor_energy_mj), std::move(edges),
                           /*require_connected=*/false);
}

ConnectivityGraph::ConnectivityGraph(Unchecked, int sensor_count, std::vector<double> batteries,
                                     std::vector<double> sensor_energy,
                                     std::vector<GraphEdge> edges, bool require_connected)
    : sensor_count_(sensor_count),
      batteries_(std::move(batteries)),
      sensor_energy_(std::move(sensor_energy)),
      edges_(std::move(edges)) {
  if (sensor_count_ < 1) throw InputError("graph needs at least one sensor node besides the sink");
  const int nodes = sensor_count_ + 1;
  if (static_cast<int>(batteries_.size()) != nodes ||
      static_cast<int>(sensor_energy_.size()) != nodes)
    throw InputError("battery and sensor-energy vectors must cover nodes 0..n");
  if (batteries_[kSink] != kInfiniteEnergy) throw InputError("sink battery must be infinite");
  for (NodeId u = 1; u < nodes; ++u) {
    if (!std::isfinite(batteries_[u]) || batteries_[u] < 0.0)
      throw InputError("sensor batteries must be finite and >= 0 (node " + std::to_string(u) + ")");
    if (!std::isfinite(sensor_energy_[u]) || sensor_energy_[u] < 0.0)
      throw InputError("sensor energies must be finite and >= 0 (node " + std::to_string(u) + ")");
  }

  adjacency_.assign(nodes, {});
  for (auto& e : edges_) {
    if (e.u > e.v) std::swap(e.u, e.v);
    if (e.u < 0 || e.v >= nodes) throw InputError("edge endpoint out of range");
    if (e.u == e.v) throw InputError("self loops are not allowed");
    if (!(e.cost_mj > 0.0) || !std::isfinite(e.cost_mj))
      throw InputError("edge costs must be finite and > 0");
  }
  std::sort(edges_.begin(), edges_.end(), [](const GraphEdge& a, const GraphEdge& b) {
    return std::pair(a.u, a.v) < std::pair(b.u, b.v);
  });
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (edges_[i - 1].u == edges_[i].u && edges_[i - 1].v == edges_[i].v)
      throw InputError("duplicate edge " + std::to_string(edges_[i].u) + "-" +
                       std::to_string(edges_[i].v));
  }
  for (const auto& e : edges_) {
    adjacency_[e.u].emplace_back(e.v, e.cost_mj);
    adjacency_[e.v].emplace_back(e.u, e.cost_mj);
  }

  std::vector<char> seen(nodes, 0);
  std::queue<NodeId> queue;
  queue.push(kSink);
  seen[kSink] = 1;
  int reached = 1;
  while (!queue.empty()) {
    NodeId u = queue.front();
    queue.pop();
    for (const auto& [v, cost] : adjacency_[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        queue.push(v);
      }
    }
  }
  connected_ = reached == nodes;
  if (require_connected && !connected_) throw InputError("graph is not connected");
}

bool ConnectivityGraph::has_edge(NodeId u, NodeId v) const {
  for (const auto& [w, cost] : adjacency_[u])
    if (w == v) return true;
  return false;
}

double ConnectivityGraph::edge_cost(NodeId u, NodeId v) const {
  for (const auto& [w, cost] : adjacency_[u])
    if (w == v) return cost;
  throw InputError("no edge " + std::to_string(u) + "-" + std::to_string(v));
}

ConnectivityGraph ConnectivityGraph::with_scaled_batteries(double s) const {
  if (!(s > 0.0)) throw InputError("battery scale must be > 0");
  std::vector<double> scaled = batteries_;
  for (NodeId u = 1; u <= sensor_count_; ++u) scaled[u] *= s;
  return with_batteries(std::move(scaled));
}

ConnectivityGraph ConnectivityGraph::with_batteries(std::vector<double> batteries_mj) const {
  return ConnectivityGraph(Unchecked{}, sensor_count_, std::move(batteries_mj), sensor_energy_,
                           edges_, /*require_connected=*/false);
}

CollectionTree::CollectionTree(const ConnectivityGraph& graph, std::vector<NodeId> parent)
    : parent_(std::move(parent)) {
  const int nodes = graph.node_count();
  if (static_cast<int>(parent_.size()) != nodes)
    throw InputError("parent map must cover nodes 0..n");
  parent_[kSink] = kSink;
  children_.assign(nodes, {});
  for (NodeId u = 1; u < nodes; ++u) {
    NodeId p = parent_[u];
    if (p < 0 || p >= nodes || p == u) throw InputError("invalid parent for node " + std::to_string(u));
    if (!graph.has_edge(u, p))
      throw InputError("tree edge " + std::to_string(u) + "-" + std::to_string(p) +
                       " is not a graph edge");
    children_[p].push_back(u);
  }

  depth_.assign(nodes, -1);
  depth_[kSink] = 0;
  std::vector<NodeId> order;
  order.reserve(nodes);
  order.push_back(kSink);
  for (std::size_t i = 0; i < order.size(); ++i) {
    NodeId u = order[i];
    for (NodeId c : children_[u]) {
      depth_[c] = depth_[u] + 1;
      order.push_back(c);
    }
  }
  if (static_cast<int>(order.size()) != nodes)
    throw InputError("parent map does not form a spanning tree (cycle or unreachable node)");

  desc_.assign(nodes, 0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    NodeId u = *it;
    if (u != kSink) desc_[parent_[u]] += desc_[u] + 1;
  }
}

int tx_packet_count(int descendants, const EnergyParams& params) {
  const long long units = static_cast<long long>(descendants) + 1;
  const long long bytes = units * params.data_unit_bytes;
  return static_cast<int>((bytes + params.packet_capacity_bytes - 1) / params.packet_capacity_bytes);
}

std::pair<int, int> node_packet_counts(const CollectionTree& tree, NodeId u,
                                       const EnergyParams& params) {
  if (u == kSink) throw InputError("the sink transmits nothing; no packet counts for node 0");
  int rx = 0;
  for (NodeId c : tree.children(u)) rx += tx_packet_count(tree.descendant_count(c), params);
  return {rx, tx_packet_count(tree.descendant_count(u), params)};
}

double node_lifetime(const CollectionTree& tree, const ConnectivityGraph& graph, NodeId u,
                     const EnergyParams& params) {
  if (u == kSink) return kInfiniteEnergy;
  const auto [rx, tx] = node_packet_counts(tree, u, params);
  const double cost = graph.edge_cost(u, tree.parent(u));
  const double denom = rx * params.rx_energy_mj + tx * cost + graph.sensor_energy_mj(u);
  if (denom <= 0.0) throw InputError("node " + std::to_string(u) + " consumes no energy per slot");
  return graph.battery_mj(u) / denom;
}

double tree_lifetime(const CollectionTree& tree, const ConnectivityGraph& graph,
                     const EnergyParams& params) {
  double best = kInfiniteEnergy;
  for (NodeId u = 1; u <= graph.sensor_count(); ++u)
    best = std::min(best, node_lifetime(tree, graph, u, params));
  return best;
}

NodeEnergyBreakdown per_slot_energy(const CollectionTree& tree, const ConnectivityGraph& graph,
                                    NodeId u, const EnergyParams& params) {
  if (u == kSink) throw InputError("the sink is excluded from energy accounting");
  NodeEnergyBreakdown out;
  const auto [rx, tx] = node_packet_counts(tree, u, params);
  out.rx_packets = rx;
  out.tx_packets = tx;
  out.rx_energy_mj = rx * params.rx_energy_mj;
  out.tx_energy_mj = tx * graph.edge_cost(u, tree.parent(u));
  out.sensor_energy_mj = graph.sensor_energy_mj(u);
  out.total_mj = rx * params.rx_energy_mj + tx * graph.edge_cost(u, tree.parent(u)) +
                 graph.sensor_energy_mj(u);
  return out;
}

}  // namespace ccast
