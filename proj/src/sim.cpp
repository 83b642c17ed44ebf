#include "ccast/sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ccast/rng.hpp"

namespace ccast {

const char* to_string(RootPlacement placement) {
  return placement == RootPlacement::center ? "center" : "corner";
}

const char* to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::bdct: return "bdct";
    case Algorithm::spt: return "spt";
    case Algorithm::mst: return "mst";
    case Algorithm::rdct: return "rdct";
  }
  return "?";
}

RootPlacement parse_placement(const std::string& text) {
  if (text == "center") return RootPlacement::center;
  if (text == "corner") return RootPlacement::corner;
  throw InputError("unknown scenario '" + text + "' (expected center or corner)");
}

Algorithm parse_algorithm(const std::string& text) {
  if (text == "bdct") return Algorithm::bdct;
  if (text == "spt") return Algorithm::spt;
  if (text == "mst") return Algorithm::mst;
  if (text == "rdct") return Algorithm::rdct;
  throw InputError("unknown algorithm '" + text + "' (expected bdct, spt, mst or rdct)");
}

void DeploymentConfig::validate() const {
  if (node_count < 1) throw InputError("deployment needs at least one sensor node");
  if (!(area_width_m > 0.0) || !(area_height_m > 0.0)) throw InputError("area must be positive");
  if (power_levels.empty()) throw InputError("deployment needs a power-level table");
  if (max_range_m > power_levels.back().range_m)
    throw InputError("max_range exceeds the largest power-level range");
  if (!(initial_battery_mj > 0.0)) throw InputError("initial battery must be > 0");
  if (battery_jitter < 0.0 || battery_jitter >= 0.5)
    throw InputError("battery jitter must lie in [0, 0.5)");
  if (sensor_energy_mj < 0.0) throw InputError("sensor energy must be >= 0");
  if (connect_retries < 1) throw InputError("need at least one generation attempt");
}

double edge_cost_for_distance(std::span<const PowerLevel> levels, double distance_m) {
  for (const auto& level : levels)
    if (level.range_m >= distance_m) return level.tx_energy_mj;
  throw InputError("distance " + std::to_string(distance_m) + " m exceeds every power level");
}

GeometricGraph generate_geometric_graph(const DeploymentConfig& config) {
  config.validate();
  const int n = config.node_count;
  for (int attempt = 0; attempt < config.connect_retries; ++attempt) {
    std::mt19937_64 rng(mix_seed(config.seed, 0x67656f6dULL, attempt));
    std::vector<Point> pos(n + 1);
    pos[kSink] = config.root_placement == RootPlacement::center
                     ? Point{config.area_width_m / 2.0, config.area_height_m / 2.0}
                     : Point{0.0, 0.0};
    for (NodeId u = 1; u <= n; ++u) {
      pos[u].x = uniform01(rng) * config.area_width_m;
      pos[u].y = uniform01(rng) * config.area_height_m;
    }

    std::vector<GraphEdge> edges;
    for (NodeId u = 0; u <= n; ++u) {
      for (NodeId v = u + 1; v <= n; ++v) {
        const double d = std::hypot(pos[u].x - pos[v].x, pos[u].y - pos[v].y);
        if (d <= config.max_range_m)
          edges.push_back({u, v, edge_cost_for_distance(config.power_levels, d)});
      }
    }

    // connectivity precheck so a failed attempt is not an exception
    std::vector<NodeId> dsu(n + 1);
    for (NodeId u = 0; u <= n; ++u) dsu[u] = u;
    auto find = [&](NodeId x) {
      while (dsu[x] != x) x = dsu[x] = dsu[dsu[x]];
      return x;
    };
    int comps = n + 1;
    for (const auto& e : edges) {
      NodeId a = find(e.u), b = find(e.v);
      if (a != b) {
        dsu[a] = b;
        --comps;
      }
    }
    if (comps != 1) continue;

    std::vector<double> batteries(n + 1, 0.0);
    std::vector<double> sensor_energy(n + 1, config.sensor_energy_mj);
    batteries[kSink] = kInfiniteEnergy;
    sensor_energy[kSink] = 0.0;
    for (NodeId u = 1; u <= n; ++u) {
      double jitter = config.battery_jitter > 0.0
                          ? 1.0 + config.battery_jitter * (2.0 * uniform01(rng) - 1.0)
                          : 1.0;
      batteries[u] = config.initial_battery_mj * jitter;
    }

    ConnectivityGraph graph(n, std::move(batteries), std::move(sensor_energy), std::move(edges));
    return GeometricGraph{std::move(graph), std::move(pos), attempt + 1};
  }
  throw GuardError("could not generate a connected graph in " +
                   std::to_string(config.connect_retries) + " attempts");
}

double jain_index(std::span<const double> values) {
  if (values.empty()) throw InputError("jain index of an empty vector");
  double sum = 0.0, sum_sq = 0.0;
  for (double x : values) {
    if (x < 0.0) throw InputError("jain index requires non-negative values");
    sum += x;
    sum_sq += x * x;
  }
  if (sum_sq == 0.0) throw InputError("jain index requires at least one positive value");
  return sum * sum / (static_cast<double>(values.size()) * sum_sq);
}

CollectionTree build_tree(const ConnectivityGraph& graph, const EnergyParams& params,
                          Algorithm algorithm, std::uint64_t seed, Execution exec) {
  switch (algorithm) {
    case Algorithm::bdct: return bdct_build(graph, params, exec).tree;
    case Algorithm::spt: return spt_build(graph);
    case Algorithm::mst: return mst_build(graph);
    case Algorithm::rdct: return rdct_build(graph, seed);
  }
  throw InputError("unknown algorithm");
}

SimulationRun simulate_lifetime(const ConnectivityGraph& graph, const EnergyParams& params,
                                Algorithm algorithm, std::uint64_t k_slots, std::uint64_t seed,
                                DrainMode mode) {
  if (k_slots == 0) throw InputError("k_slots must be >= 1");
  params.validate();
  const int n = graph.sensor_count();
  for (NodeId u = 1; u <= n; ++u)
    if (!(graph.battery_mj(u) > 0.0)) throw InputError("all sensor batteries must be > 0");

  SimulationRun run;
  std::vector<double> batteries(n + 1, 0.0);
  batteries[kSink] = kInfiniteEnergy;
  for (NodeId u = 1; u <= n; ++u) batteries[u] = graph.battery_mj(u);

  std::vector<double> need(n + 1, 0.0);
  for (int window = 0;; ++window) {
    const ConnectivityGraph current = graph.with_batteries(batteries);
    const CollectionTree tree =
        build_tree(current, params, algorithm, mix_seed(seed, 0x52444354ULL, window));
    ++run.tree_builds;
    run.tree_snapshots.push_back(tree.parent_map());
    for (NodeId u = 1; u <= n; ++u) need[u] = per_slot_energy(tree, current, u, params).total_mj;

    std::uint64_t steps = 0;
    bool depleted = false;
    if (mode == DrainMode::fast_forward) {
      std::uint64_t survivable = UINT64_MAX;
      for (NodeId u = 1; u <= n; ++u) {
        const double slots = std::floor(batteries[u] / need[u]);
        survivable = std::min(survivable, slots >= 1e18 ? UINT64_MAX
                                                        : static_cast<std::uint64_t>(slots));
      }
      steps = std::min(survivable, k_slots);
      for (NodeId u = 1; u <= n; ++u) batteries[u] -= static_cast<double>(steps) * need[u];
      depleted = survivable < k_slots;
    } else {
      while (steps < k_slots) {
        bool ok = true;
        for (NodeId u = 1; u <= n && ok; ++u) ok = batteries[u] >= need[u];
        if (!ok) {
          depleted = true;
          break;
        }
        for (NodeId u = 1; u <= n; ++u) batteries[u] -= need[u];
        ++steps;
      }
    }
    run.lifetime_slots += steps;
    run.checkpoints.emplace_back(run.lifetime_slots,
                                 std::vector<double>(batteries.begin() + 1, batteries.end()));
    if (depleted) break;
  }
  run.final_batteries.assign(batteries.begin() + 1, batteries.end());
  return run;
}

RoundsResult rounds_experiment(const ConnectivityGraph& graph, const EnergyParams& params,
                               Algorithm algorithm, int rounds, long long packets_per_node,
                               std::uint64_t seed) {
  if (rounds < 1) throw InputError("rounds must be >= 1");
  if (packets_per_node < 1) throw InputError("packets_per_node must be >= 1");
  params.validate();
  const int n = graph.sensor_count();

  std::vector<double> batteries(n + 1, 0.0);
  batteries[kSink] = kInfiniteEnergy;
  for (NodeId u = 1; u <= n; ++u) batteries[u] = graph.battery_mj(u);

  RoundsResult result;
  result.initial_jain = jain_index({batteries.data() + 1, static_cast<std::size_t>(n)});

  const double ppn = static_cast<double>(packets_per_node);
  for (int round = 1; round <= rounds; ++round) {
    const ConnectivityGraph current = graph.with_batteries(batteries);
    const CollectionTree tree =
        build_tree(current, params, algorithm, mix_seed(seed, 0x524e4453ULL, round));

    // A node with D descendants forwards (D+1)*ppn packets and takes in
    // D*ppn from its children; sensing is paid once per round.
    std::vector<double> need(n + 1, 0.0);
    int max_load = 0;
    for (NodeId u = 1; u <= n; ++u) {
      const int d = tree.descendant_count(u);
      max_load = std::max(max_load, d + 1);
      need[u] = ppn * ((d + 1) * current.edge_cost(u, tree.parent(u)) + d * params.rx_energy_mj) +
                current.sensor_energy_mj(u);
    }

    bool feasible = true;
    for (NodeId u = 1; u <= n && feasible; ++u) feasible = batteries[u] >= need[u];
    if (!feasible) {
      result.halted_early = true;
      break;
    }
    for (NodeId u = 1; u <= n; ++u) batteries[u] -= need[u];

    RoundRecord record;
    record.round = round;
    record.jain = jain_index({batteries.data() + 1, static_cast<std::size_t>(n)});
    record.max_load = max_load;
    record.batteries_after.assign(batteries.begin() + 1, batteries.end());
    record.tree_parent = tree.parent_map();
    result.rounds.push_back(std::move(record));
  }
  return result;
}

CompareTable compare_algorithms(const CompareConfig& config) {
  if (config.trials < 1) throw InputError("trials must be >= 1");
  if (config.node_counts.empty() || config.scenarios.empty() || config.algorithms.empty())
    throw InputError("comparison needs node counts, scenarios and algorithms");
  config.params.validate();

  const int algs = static_cast<int>(config.algorithms.size());
  CompareTable table;
  for (RootPlacement scenario : config.scenarios)
    for (int n : config.node_counts)
      for (Algorithm algorithm : config.algorithms) {
        CompareCell cell;
        cell.scenario = scenario;
        cell.node_count = n;
        cell.algorithm = algorithm;
        cell.trial_lifetimes.assign(config.trials, 0);
        table.cells.push_back(std::move(cell));
      }

  struct Task {
    int scenario_idx, n_idx, trial;
  };
  std::vector<Task> tasks;
  for (int s = 0; s < static_cast<int>(config.scenarios.size()); ++s)
    for (int i = 0; i < static_cast<int>(config.node_counts.size()); ++i)
      for (int t = 0; t < config.trials; ++t) tasks.push_back({s, i, t});

  const auto run_task = [&](const Task& task) {
    DeploymentConfig deployment = config.deployment;
    deployment.root_placement = config.scenarios[task.scenario_idx];
    deployment.node_count = config.node_counts[task.n_idx];
    deployment.seed = mix_seed(config.master_seed, task.scenario_idx * 1000003ULL + task.n_idx,
                               task.trial);
    const GeometricGraph geo = generate_geometric_graph(deployment);
    for (int a = 0; a < algs; ++a) {
      const std::uint64_t sim_seed = mix_seed(deployment.seed, 0xa16f0000ULL + a);
      const SimulationRun run = simulate_lifetime(geo.graph, config.params, config.algorithms[a],
                                                  config.k_slots, sim_seed);
      const std::size_t cell_idx =
          (static_cast<std::size_t>(task.scenario_idx) * config.node_counts.size() + task.n_idx) *
              algs +
          a;
      table.cells[cell_idx].trial_lifetimes[task.trial] = run.lifetime_slots;
    }
  };

  if (config.exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(tasks.size()); ++i)
      run_task(tasks[i]);
  } else {
    for (const auto& task : tasks) run_task(task);
  }

  for (auto& cell : table.cells) {
    double sum = 0.0;
    for (std::uint64_t v : cell.trial_lifetimes) sum += static_cast<double>(v);
    cell.mean_lifetime = sum / static_cast<double>(config.trials);
  }
  // normalize within each (scenario, N) group
  const std::size_t group = static_cast<std::size_t>(algs);
  for (std::size_t base = 0; base < table.cells.size(); base += group) {
    double best = 0.0;
    for (std::size_t i = 0; i < group; ++i) best = std::max(best, table.cells[base + i].mean_lifetime);
    for (std::size_t i = 0; i < group; ++i)
      table.cells[base + i].normalized = best > 0.0 ? table.cells[base + i].mean_lifetime / best : 0.0;
  }
  return table;
}

}  // namespace ccast
