#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ccast/algorithms.hpp"
#include "ccast/model.hpp"

namespace ccast {

enum class RootPlacement { center, corner };
enum class Algorithm { bdct, spt, mst, rdct };

const char* to_string(RootPlacement placement);
const char* to_string(Algorithm algorithm);
RootPlacement parse_placement(const std::string& text);
Algorithm parse_algorithm(const std::string& text);

// Random geometric deployment over a rectangle; the sink sits at the center
// or a corner and sensors land uniformly at random.
struct DeploymentConfig {
  double area_width_m = 100.0;
  double area_height_m = 100.0;
  int node_count = 50;  // sensors, excluding the sink
  RootPlacement root_placement = RootPlacement::center;
  double max_range_m = 25.0;
  std::vector<PowerLevel> power_levels = EnergyParams::default_power_levels(25.0);
  std::uint64_t seed = 0;
  // 2200 mAh * 3.7 V = 29304 J; scaled 1/1000 by default so runs stay short.
  double initial_battery_mj = 29304.0;
  double battery_jitter = 0.0;  // fraction, e.g. 0.005 for +-0.5%
  double sensor_energy_mj = 1.32;
  int connect_retries = 100;

  void validate() const;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct GeometricGraph {
  ConnectivityGraph graph;
  std::vector<Point> positions;  // by node id, [0] is the sink
  int attempts = 1;              // regenerations needed to get a connected graph
};

// Cheapest power level whose range covers the distance.
double edge_cost_for_distance(std::span<const PowerLevel> levels, double distance_m);

GeometricGraph generate_geometric_graph(const DeploymentConfig& config);

// Jain's fairness index (sum x)^2 / (n * sum x^2), in (0, 1].
double jain_index(std::span<const double> values);

// Slot-by-slot is the reference drain loop; fast_forward jumps whole
// windows in closed form and must agree with it exactly.
enum class DrainMode { fast_forward, slot_by_slot };

struct SimulationRun {
  std::uint64_t lifetime_slots = 0;
  int tree_builds = 0;
  std::vector<double> final_batteries;
  std::vector<std::vector<NodeId>> tree_snapshots;  // parent map per window
  // battery vector at each reconstruction boundary (post-drain)
  std::vector<std::pair<std::uint64_t, std::vector<double>>> checkpoints;
};

// Periodic data collection until the first depletion, rebuilding the tree
// every k_slots slots from the then-remaining batteries. Sleep-phase and
// tree-construction energy are not modeled.
SimulationRun simulate_lifetime(const ConnectivityGraph& graph, const EnergyParams& params,
                                Algorithm algorithm, std::uint64_t k_slots, std::uint64_t seed,
                                DrainMode mode = DrainMode::fast_forward);

struct RoundRecord {
  int round = 0;  // 1-based
  double jain = 0.0;
  int max_load = 0;
  std::vector<double> batteries_after;  // sensors only, index 0 = node 1
  std::vector<NodeId> tree_parent;
};

struct RoundsResult {
  double initial_jain = 0.0;
  std::vector<RoundRecord> rounds;
  bool halted_early = false;
};

// Testbed-style protocol: per round, rebuild the tree, then every node ships
// (D_u + 1) * packets_per_node packets to its parent (receiving its
// children's shares) plus one sensing cost. Halts early with partial results
// once a node cannot finish the next round.
RoundsResult rounds_experiment(const ConnectivityGraph& graph, const EnergyParams& params,
                               Algorithm algorithm, int rounds, long long packets_per_node,
                               std::uint64_t seed);

struct CompareConfig {
  std::vector<int> node_counts = {50, 100, 200};
  std::vector<RootPlacement> scenarios = {RootPlacement::center, RootPlacement::corner};
  std::vector<Algorithm> algorithms = {Algorithm::bdct, Algorithm::spt, Algorithm::mst,
                                       Algorithm::rdct};
  int trials = 10;
  std::uint64_t master_seed = 1;
  std::uint64_t k_slots = 10000;
  DeploymentConfig deployment;  // node_count/root_placement/seed set per cell
  EnergyParams params = EnergyParams::defaults();
  Execution exec = Execution::parallel;
};

struct CompareCell {
  RootPlacement scenario = RootPlacement::center;
  int node_count = 0;
  Algorithm algorithm = Algorithm::bdct;
  std::vector<std::uint64_t> trial_lifetimes;
  double mean_lifetime = 0.0;
  double normalized = 0.0;  // mean / best mean within the (scenario, N) cell
};

struct CompareTable {
  std::vector<CompareCell> cells;  // ordered scenario-major, then N, then algorithm
};

// All algorithms on the same per-trial graphs; trials are independent and
// run in parallel with per-trial seeds derived from the master seed.
CompareTable compare_algorithms(const CompareConfig& config);

// Tree construction dispatch shared by the simulator and the CLI.
CollectionTree build_tree(const ConnectivityGraph& graph, const EnergyParams& params,
                          Algorithm algorithm, std::uint64_t seed,
                          Execution exec = Execution::parallel);

}  // namespace ccast
