#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "ccast/errors.hpp"

namespace ccast {

// Node ids are dense: 0 is the sink, 1..n are the sensor nodes.
using NodeId = std::int32_t;
inline constexpr NodeId kSink = 0;

inline constexpr double kInfiniteEnergy = std::numeric_limits<double>::infinity();

struct PowerLevel {
  double range_m = 0.0;
  double tx_energy_mj = 0.0;
};

// Global energy constants. All energies in millijoules, sizes in bytes.
struct EnergyParams {
  double rx_energy_mj = 1.452;      // e_r, per received packet
  int data_unit_bytes = 100;        // l
  int packet_capacity_bytes = 114;  // beta
  double avg_tx_energy_mj = 0.0;    // C_avg; 0 means "derive from power_levels"
  std::vector<PowerLevel> power_levels;

  // Radio table anchored to TelosB measurements: 1.287 mJ at full power,
  // scaled by the min/max current ratio 10/18.33 at the lowest level,
  // ranges evenly spaced up to max_range.
  static std::vector<PowerLevel> default_power_levels(double max_range_m, int levels = 8);
  static EnergyParams defaults(double max_range_m = 25.0);

  // C_avg as configured, or the mean of the power-level energies.
  double c_avg() const;
  void validate() const;  // throws InputError
};

struct GraphEdge {
  NodeId u = 0;  // u < v after normalization
  NodeId v = 0;
  double cost_mj = 0.0;
};

// Undirected connectivity graph: n sensor nodes plus the sink (id 0).
// Immutable after construction; all operations on it are pure.
class ConnectivityGraph {
 public:
  // Validates: n >= 1, sink battery infinite and unique, finite non-negative
  // sensor batteries, positive finite edge costs, no self loops or duplicate
  // edges, and connectivity.
  ConnectivityGraph(int sensor_count, std::vector<double> batteries_mj,
                    std::vector<double> sensor_energy_mj, std::vector<GraphEdge> edges);

  // Same checks minus connectivity. Needed by the set-cover gadget, whose
  // graph is legitimately disconnected when some element lies in no subset.
  static ConnectivityGraph allow_disconnected(int sensor_count, std::vector<double> batteries_mj,
                                              std::vector<double> sensor_energy_mj,
                                              std::vector<GraphEdge> edges);

  int sensor_count() const { return sensor_count_; }
  int node_count() const { return sensor_count_ + 1; }
  bool connected() const { return connected_; }

  double battery_mj(NodeId u) const { return batteries_[u]; }
  double sensor_energy_mj(NodeId u) const { return sensor_energy_[u]; }

  std::span<const GraphEdge> edges() const { return edges_; }
  std::span<const std::pair<NodeId, double>> neighbors(NodeId u) const { return adjacency_[u]; }

  bool has_edge(NodeId u, NodeId v) const;
  double edge_cost(NodeId u, NodeId v) const;  // throws InputError if absent

  // Batteries scaled by s > 0 (sink stays infinite).
  ConnectivityGraph with_scaled_batteries(double s) const;
  ConnectivityGraph with_batteries(std::vector<double> batteries_mj) const;

 private:
  struct Unchecked {};
  ConnectivityGraph(Unchecked, int sensor_count, std::vector<double> batteries,
                    std::vector<double> sensor_energy, std::vector<GraphEdge> edges,
                    bool require_connected);

  int sensor_count_ = 0;
  bool connected_ = false;
  std::vector<double> batteries_;
  std::vector<double> sensor_energy_;
  std::vector<GraphEdge> edges_;
  std::vector<std::vector<std::pair<NodeId, double>>> adjacency_;
};

// Rooted spanning arborescence given as a parent map over the graph's nodes.
// Depths, children lists and descendant counts are derived on construction.
class CollectionTree {
 public:
  // parent[u] for u = 1..n must name an existing graph edge; parent[0] is
  // ignored. Throws InputError on cycles, non-edges, or wrong size.
  CollectionTree(const ConnectivityGraph& graph, std::vector<NodeId> parent);

  int sensor_count() const { return static_cast<int>(parent_.size()) - 1; }
  int node_count() const { return static_cast<int>(parent_.size()); }

  NodeId parent(NodeId u) const { return parent_[u]; }
  int depth(NodeId u) const { return depth_[u]; }            // h_u, h_sink = 0
  int descendant_count(NodeId u) const { return desc_[u]; }  // D_u, D_sink = n
  const std::vector<NodeId>& children(NodeId u) const { return children_[u]; }
  const std::vector<NodeId>& parent_map() const { return parent_; }

 private:
  std::vector<NodeId> parent_;
  std::vector<int> depth_;
  std::vector<int> desc_;
  std::vector<std::vector<NodeId>> children_;
};

struct NodeEnergyBreakdown {
  int rx_packets = 0;  // n_u^r
  int tx_packets = 0;  // n_u^t
  double rx_energy_mj = 0.0;
  double tx_energy_mj = 0.0;
  double sensor_energy_mj = 0.0;
  double total_mj = 0.0;
};

// Packets a node with D descendants sends per wake-up under piggyback
// aggregation: ceil((D + 1) * l / beta).
int tx_packet_count(int descendants, const EnergyParams& params);

// (n_u^r, n_u^t) for a non-sink node; throws on the sink.
std::pair<int, int> node_packet_counts(const CollectionTree& tree, NodeId u,
                                       const EnergyParams& params);

// Wake-up periods node u survives: B_u / (n_r*e_r + n_t*c + k_u).
// Infinite for the sink.
double node_lifetime(const CollectionTree& tree, const ConnectivityGraph& graph, NodeId u,
                     const EnergyParams& params);

// min over sensor nodes of node_lifetime.
double tree_lifetime(const CollectionTree& tree, const ConnectivityGraph& graph,
                     const EnergyParams& params);

// Per-wake-up energy ledger for a non-sink node; throws on the sink.
NodeEnergyBreakdown per_slot_energy(const CollectionTree& tree, const ConnectivityGraph& graph,
                                    NodeId u, const EnergyParams& params);

}  // namespace ccast
