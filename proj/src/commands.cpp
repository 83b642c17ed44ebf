#include "ccast/commands.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "ccast/gadget.hpp"
#include "ccast/graph_io.hpp"

namespace fs = std::filesystem;

namespace ccast {
namespace {

std::string fmt(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.9g", value);
  return buffer;
}

// write-temp-then-rename so readers never see half a file
void atomic_write(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write to '" + tmp.string() + "'");
    out << content;
  }
  fs::rename(tmp, path);
}

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

void write_manifest(const fs::path& out_dir, const std::string& command,
                    const std::string& config_path, std::uint64_t seed,
                    const std::vector<std::string>& outputs) {
  nlohmann::json manifest;
  manifest["command"] = command;
  manifest["config"] = config_path;
  manifest["seed"] = seed;
  manifest["out_dir"] = out_dir.string();
  manifest["tool_version"] = kToolVersion;
  manifest["timestamp"] = timestamp_utc();
  manifest["outputs"] = outputs;
  atomic_write(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

fs::path prepare_out_dir(const std::string& out_dir) {
  fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create output directory '" + out_dir + "'");
  return dir;
}

std::vector<PowerLevel> parse_power_levels(const std::string& text) {
  std::vector<PowerLevel> levels;
  std::istringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos)
      throw InputError("power level '" + item + "' must look like range:energy");
    try {
      levels.push_back({std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1))});
    } catch (const std::exception&) {
      throw InputError("power level '" + item + "' must look like range:energy");
    }
  }
  if (levels.empty()) throw InputError("empty power-level table");
  return levels;
}

}  // namespace

EnergyParams energy_params_from(const Config& config, double max_range_m) {
  EnergyParams params;
  params.power_levels = config.has("energy", "power_levels")
                            ? parse_power_levels(config.get_string("energy", "power_levels", ""))
                            : EnergyParams::default_power_levels(max_range_m);
  params.rx_energy_mj = config.get_double("energy", "e_r", 1.452);
  params.data_unit_bytes = static_cast<int>(config.get_int("energy", "l", 100));
  params.packet_capacity_bytes = static_cast<int>(config.get_int("energy", "beta", 114));
  params.avg_tx_energy_mj = config.get_double("energy", "c_avg", 0.0);
  params.validate();
  return params;
}

DeploymentConfig deployment_from(const Config& config) {
  DeploymentConfig d;
  d.area_width_m = config.get_double("deployment", "area_width", 100.0);
  d.area_height_m = config.get_double("deployment", "area_height", 100.0);
  d.max_range_m = config.get_double("deployment", "max_range", 25.0);
  d.power_levels = config.has("energy", "power_levels")
                       ? parse_power_levels(config.get_string("energy", "power_levels", ""))
                       : EnergyParams::default_power_levels(d.max_range_m);
  d.initial_battery_mj = config.get_double("deployment", "initial_battery_mj", 29304000.0);
  d.battery_jitter = config.get_double("deployment", "battery_jitter", 0.0);
  d.sensor_energy_mj = config.get_double("deployment", "sensor_energy_mj", 1.32);
  d.connect_retries = static_cast<int>(config.get_int("deployment", "connect_retries", 100));
  return d;
}

CompareConfig compare_config_from(const Config& config, const SimulateArgs& args) {
  CompareConfig cc;
  cc.deployment = deployment_from(config);
  cc.params = energy_params_from(config, cc.deployment.max_range_m);
  cc.node_counts = config.get_int_list("simulate", "node_counts", {50, 100, 200});

  std::vector<std::string> scenario_names =
      config.get_list("simulate", "scenarios", {"center", "corner"});
  if (args.scenario) scenario_names = {*args.scenario};
  cc.scenarios.clear();
  for (const auto& name : scenario_names) cc.scenarios.push_back(parse_placement(name));

  cc.algorithms.clear();
  for (const auto& name :
       config.get_list("simulate", "algorithms", {"bdct", "spt", "mst", "rdct"}))
    cc.algorithms.push_back(parse_algorithm(name));

  cc.trials = args.trials ? *args.trials
                          : static_cast<int>(config.get_int("simulate", "trials", 10));
  cc.k_slots = args.k_slots ? *args.k_slots
                            : static_cast<std::uint64_t>(config.get_int("simulate", "k_slots", 10000));
  cc.master_seed = args.common.seed
                       ? *args.common.seed
                       : static_cast<std::uint64_t>(config.get_int("simulate", "seed", 1));
  const double scale = config.get_double("simulate", "battery_scale", 0.001);
  if (!(scale > 0.0)) throw InputError("battery_scale must be > 0");
  cc.deployment.initial_battery_mj *= scale;
  return cc;
}

void run_build(const BuildArgs& args, std::ostream& log) {
  const ConnectivityGraph graph = load_graph(args.graph_path);
  const Config params_config =
      args.params_path.empty() ? Config{} : Config::load(args.params_path);
  EnergyParams params = energy_params_from(params_config, 25.0);

  const fs::path out_dir = prepare_out_dir(args.common.out_dir);
  const std::uint64_t seed = args.common.seed.value_or(1);

  std::optional<CollectionTree> tree;
  std::optional<BuildTrace> trace;
  if (args.algorithm == "oracle") {
    OracleOptions options;
    options.max_sensor_nodes = args.oracle_limit;
    tree = exhaustive_optimal(graph, params, options).tree;
  } else if (args.algorithm == "bdct") {
    auto result = bdct_build(graph, params);
    tree = std::move(result.tree);
    trace = std::move(result.trace);
  } else {
    tree = build_tree(graph, params, parse_algorithm(args.algorithm), seed);
  }

  std::ostringstream tree_csv;
  write_tree_csv(tree_csv, *tree);
  atomic_write(out_dir / "tree.csv", tree_csv.str());

  double worst = kInfiniteEnergy;
  NodeId bottleneck = 1;
  std::ostringstream report;
  report << "graph: " << args.graph_path << "\n";
  report << "algorithm: " << args.algorithm << "\n";
  report << "sensors: " << graph.sensor_count() << "\n";
  for (NodeId u = 1; u <= graph.sensor_count(); ++u) {
    const double life = node_lifetime(*tree, graph, u, params);
    if (life < worst) {
      worst = life;
      bottleneck = u;
    }
  }
  report << "tree_lifetime: " << fmt(tree_lifetime(*tree, graph, params)) << "\n";
  report << "bottleneck_node: " << bottleneck << "\n";
  for (NodeId u = 1; u <= graph.sensor_count(); ++u)
    report << "node " << u << " parent " << tree->parent(u) << " depth " << tree->depth(u)
           << " lifetime " << fmt(node_lifetime(*tree, graph, u, params)) << "\n";
  if (trace) {
    report << "trace:\n";
    for (const auto& step : *trace)
      report << "  iter " << step.iteration << " attach " << step.uncovered << " -> "
             << step.covered << " score " << fmt(step.score)
             << (step.tie_break_used ? " (tie broken)" : "") << "\n";
  }
  atomic_write(out_dir / "report.txt", report.str());
  write_manifest(out_dir, "build", args.graph_path, seed, {"tree.csv", "report.txt"});

  log << "wrote " << (out_dir / "tree.csv").string() << "\n";
  log << "tree lifetime: " << fmt(worst) << " wake-up periods (bottleneck node " << bottleneck
      << ")\n";
}

void run_simulate(const SimulateArgs& args, std::ostream& log) {
  const Config config = args.config_path.empty() ? Config{} : Config::load(args.config_path);
  const CompareConfig cc = compare_config_from(config, args);
  const CompareTable table = compare_algorithms(cc);

  std::ostringstream comparison;
  comparison << "scenario,N,algorithm,trial,lifetime_slots,normalized\n";
  for (const auto& cell : table.cells)
    for (std::size_t trial = 0; trial < cell.trial_lifetimes.size(); ++trial)
      comparison << to_string(cell.scenario) << "," << cell.node_count << ","
                 << to_string(cell.algorithm) << "," << trial << ","
                 << cell.trial_lifetimes[trial] << "," << fmt(cell.normalized) << "\n";

  std::ostringstream series;
  series << "scenario,N,algorithm,mean_lifetime_slots,normalized\n";
  for (const auto& cell : table.cells)
    series << to_string(cell.scenario) << "," << cell.node_count << ","
           << to_string(cell.algorithm) << "," << fmt(cell.mean_lifetime) << ","
           << fmt(cell.normalized) << "\n";

  const fs::path out_dir = prepare_out_dir(args.common.out_dir);
  atomic_write(out_dir / "comparison.csv", comparison.str());
  atomic_write(out_dir / "series.csv", series.str());
  write_manifest(out_dir, "simulate", args.config_path, cc.master_seed,
                 {"comparison.csv", "series.csv"});

  log << "wrote " << (out_dir / "comparison.csv").string() << " ("
      << table.cells.size() * static_cast<std::size_t>(cc.trials) << " data rows)\n";
  for (const auto& cell : table.cells)
    if (cell.normalized == 1.0)
      log << "best in " << to_string(cell.scenario) << "/N=" << cell.node_count << ": "
          << to_string(cell.algorithm) << " (mean " << fmt(cell.mean_lifetime) << " slots)\n";
}

void run_rounds(const RoundsArgs& args, std::ostream& log) {
  const Config config = args.config_path.empty() ? Config{} : Config::load(args.config_path);

  DeploymentConfig deployment = deployment_from(config);
  deployment.node_count = static_cast<int>(config.get_int("rounds", "node_count", 20));
  deployment.root_placement =
      parse_placement(config.get_string("rounds", "scenario", "center"));
  const double scale = config.get_double("rounds", "battery_scale", 1.0);
  if (!(scale > 0.0)) throw InputError("battery_scale must be > 0");
  deployment.initial_battery_mj *= scale;
  const std::uint64_t seed = args.common.seed.value_or(
      static_cast<std::uint64_t>(config.get_int("rounds", "seed", 1)));
  deployment.seed = seed;

  const EnergyParams params = energy_params_from(config, deployment.max_range_m);
  const int rounds = static_cast<int>(config.get_int("rounds", "rounds", 7));
  const long long packets = config.get_int("rounds", "packets_per_node", 30000);
  std::vector<Algorithm> algorithms;
  for (const auto& name : config.get_list("rounds", "algorithms", {"bdct", "spt", "rdct"}))
    algorithms.push_back(parse_algorithm(name));

  const GeometricGraph geo = generate_geometric_graph(deployment);

  std::ostringstream csv;
  csv << "round,algorithm,jain_index,max_load\n";
  for (Algorithm algorithm : algorithms) {
    const RoundsResult result =
        rounds_experiment(geo.graph, params, algorithm, rounds, packets, seed);
    csv << "0," << to_string(algorithm) << "," << fmt(result.initial_jain) << ",0\n";
    for (const auto& record : result.rounds)
      csv << record.round << "," << to_string(algorithm) << "," << fmt(record.jain) << ","
          << record.max_load << "\n";
    if (result.halted_early)
      log << to_string(algorithm) << ": halted after " << result.rounds.size()
          << " rounds (battery depleted)\n";
  }

  const fs::path out_dir = prepare_out_dir(args.common.out_dir);
  atomic_write(out_dir / "rounds.csv", csv.str());
  write_manifest(out_dir, "rounds", args.config_path, seed, {"rounds.csv"});
  log << "wrote " << (out_dir / "rounds.csv").string() << "\n";
}

void run_gadget(const GadgetArgs& args, std::ostream& log) {
  const SetCoverInstance instance = load_set_cover(args.instance_path);

  // Both verdicts are computed before anything is written, so a size-guard
  // failure leaves no partial output behind.
  const bool coverable = set_cover_bruteforce(instance);
  const GadgetGraph gadget = build_gadget(instance);
  const bool lifetime_one = has_lifetime_one_tree(gadget);
  if (coverable != lifetime_one)
    throw std::runtime_error("reduction mismatch: set cover says " +
                             std::string(coverable ? "yes" : "no") + ", lifetime-1 search says " +
                             std::string(lifetime_one ? "yes" : "no"));

  std::optional<CollectionTree> witness;
  if (coverable) {
    witness = witness_tree(gadget);
    if (!witness || !gadget_lifetime_exactly_one(gadget, *witness))
      throw std::runtime_error("witness construction did not reach lifetime one");
  }

  const fs::path out_dir = prepare_out_dir(args.common.out_dir);
  std::ostringstream verdict;
  verdict << "cover: " << (coverable ? "yes" : "no") << "\n";
  verdict << "lifetime-1 tree: " << (lifetime_one ? "yes" : "no") << "\n";
  std::vector<std::string> outputs{"verdict.txt"};
  if (witness) {
    std::ostringstream tree_csv;
    write_tree_csv(tree_csv, *witness);
    atomic_write(out_dir / "witness_tree.csv", tree_csv.str());
    outputs.push_back("witness_tree.csv");
  }
  atomic_write(out_dir / "verdict.txt", verdict.str());
  write_manifest(out_dir, "gadget", args.instance_path, args.common.seed.value_or(0), outputs);

  log << "cover: " << (coverable ? "yes" : "no") << ", lifetime-1 tree: "
      << (lifetime_one ? "yes" : "no");
  if (witness) log << ", witness written";
  log << "\n";
}

int run_with_exit_code(const std::function<void()>& body, std::ostream& err) {
  try {
    body();
    return 0;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const GuardError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace ccast
