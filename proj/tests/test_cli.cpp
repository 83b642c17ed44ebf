#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ccast/commands.hpp"
#include "ccast/gadget.hpp"
#include "ccast/graph_io.hpp"

using namespace ccast;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("ccast_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const fs::path& dir, const std::string& name, const std::string& content) {
  const fs::path path = dir / name;
  std::ofstream out(path);
  out << content;
  return path;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

int count_lines(const std::string& text) {
  int lines = 0;
  for (char c : text) lines += c == '\n';
  return lines;
}

// the walkthrough-shaped instance from the algorithm tests, as a graph file
const char* kWalkthroughGraph =
    "nodes 8\n"
    "node 0 inf 0\n"
    "node 1 10 0.1\n"
    "node 2 1000 0.1\n"
    "node 3 1000 0.1\n"
    "node 4 1000 0.1\n"
    "node 5 1000 0.1\n"
    "node 6 1000 0.1\n"
    "node 7 1000 0.1\n"
    "node 8 1000 0.1\n"
    "edge 0 1 3.0\n"
    "edge 0 2 0.8\n"
    "edge 0 3 0.9\n"
    "edge 0 4 1.0\n"
    "edge 1 2 0.5\n"
    "edge 1 5 2.0\n"
    "edge 2 5 0.7\n"
    "edge 2 6 0.9\n"
    "edge 3 6 1.1\n"
    "edge 3 7 0.8\n"
    "edge 3 4 1.2\n"
    "edge 4 7 1.0\n"
    "edge 4 8 0.6\n";

}  // namespace

TEST_CASE("config parser") {
  std::istringstream in(
      "# comment\n"
      "[energy]\n"
      "e_r = 1.0\n"
      "l = 50\n"
      "[simulate]\n"
      "node_counts = 10, 20 ,30\n"
      "scenarios = corner\n");
  auto config = Config::parse(in, "demo");
  CHECK(config.get_double("energy", "e_r", 9.9) == 1.0);
  CHECK(config.get_int("energy", "l", 0) == 50);
  CHECK(config.get_int("energy", "beta", 114) == 114);
  CHECK(config.get_int_list("simulate", "node_counts", {}) == std::vector<int>{10, 20, 30});
  CHECK(config.get_list("simulate", "scenarios", {}) == std::vector<std::string>{"corner"});

  std::istringstream bad("key = 1\n");
  CHECK_THROWS_AS(Config::parse(bad, "bad"), InputError);
  std::istringstream bad2("[s]\nkey 1\n");
  CHECK_THROWS_AS(Config::parse(bad2, "bad"), InputError);
}

TEST_CASE("energy params from config use the table defaults") {
  std::istringstream in("[energy]\nbeta = 120\n");
  auto params = energy_params_from(Config::parse(in), 25.0);
  CHECK(params.packet_capacity_bytes == 120);
  CHECK(params.data_unit_bytes == 100);
  CHECK(params.rx_energy_mj == 1.452);
  CHECK(params.power_levels.size() == 8);

  std::istringstream custom("[energy]\npower_levels = 10:0.5, 20:0.9\nc_avg = 0.7\n");
  auto custom_params = energy_params_from(Config::parse(custom), 25.0);
  CHECK(custom_params.power_levels.size() == 2);
  CHECK(custom_params.c_avg() == 0.7);
}

TEST_CASE("build command writes the expected tree and report") {
  const auto dir = fresh_dir("build");
  const auto graph_path = write_file(dir, "walkthrough.graph", kWalkthroughGraph);

  BuildArgs args;
  args.graph_path = graph_path.string();
  args.algorithm = "bdct";
  args.common.out_dir = (dir / "out").string();
  std::ostringstream log;
  run_build(args, log);

  auto graph = load_graph(graph_path.string());
  std::ifstream tree_in(dir / "out" / "tree.csv");
  auto tree = parse_tree_csv(tree_in, graph);
  CHECK(tree.parent(1) == 2);  // the expensive sink link is avoided

  const std::string report = slurp(dir / "out" / "report.txt");
  CHECK(report.find("tree_lifetime:") != std::string::npos);
  CHECK(report.find("bottleneck_node:") != std::string::npos);
  CHECK(report.find("trace:") != std::string::npos);
  CHECK(fs::exists(dir / "out" / "manifest.json"));
  CHECK(log.str().find("tree lifetime") != std::string::npos);
}

TEST_CASE("build with the oracle matches exhaustive search") {
  const auto dir = fresh_dir("build_oracle");
  const auto graph_path = write_file(dir, "five.graph",
                                     "nodes 4\n"
                                     "node 0 inf 0\n"
                                     "node 1 9 0.2\n"
                                     "node 2 14 0.2\n"
                                     "node 3 11 0.2\n"
                                     "node 4 6 0.2\n"
                                     "edge 0 1 1.0\n"
                                     "edge 0 2 1.4\n"
                                     "edge 1 2 0.6\n"
                                     "edge 1 3 0.8\n"
                                     "edge 2 4 0.9\n"
                                     "edge 3 4 0.7\n");
  BuildArgs args;
  args.graph_path = graph_path.string();
  args.algorithm = "oracle";
  args.common.out_dir = (dir / "out").string();
  std::ostringstream log;
  run_build(args, log);

  auto graph = load_graph(graph_path.string());
  std::ifstream tree_in(dir / "out" / "tree.csv");
  auto tree = parse_tree_csv(tree_in, graph);
  auto oracle = exhaustive_optimal(graph, energy_params_from(Config{}, 25.0));
  CHECK(tree.parent_map() == oracle.tree.parent_map());
}

TEST_CASE("malformed graph input maps to exit code 1 and names the line") {
  const auto dir = fresh_dir("badinput");
  const auto graph_path =
      write_file(dir, "bad.graph", "nodes 1\nnode 0 inf 0\nnode 1 5 0\nedge 0 oops 1\n");
  BuildArgs args;
  args.graph_path = graph_path.string();
  args.common.out_dir = (dir / "out").string();
  std::ostringstream log, err;
  const int code = run_with_exit_code([&] { run_build(args, log); }, err);
  CHECK(code == 1);
  CHECK(err.str().find(":4") != std::string::npos);
}

TEST_CASE("simulate command: row counts and byte-identical reruns") {
  const auto dir = fresh_dir("simulate");
  const auto config_path = write_file(dir, "sim.ini",
                                      "[deployment]\n"
                                      "area_width = 40\n"
                                      "area_height = 40\n"
                                      "[simulate]\n"
                                      "node_counts = 6, 9\n"
                                      "trials = 3\n"
                                      "seed = 7\n");
  SimulateArgs args;
  args.config_path = config_path.string();
  args.common.out_dir = (dir / "a").string();
  std::ostringstream log;
  run_simulate(args, log);

  const std::string csv = slurp(dir / "a" / "comparison.csv");
  // header + 2 N values * 2 scenarios * 3 trials * 4 algorithms
  CHECK(count_lines(csv) == 1 + 2 * 2 * 3 * 4);
  CHECK(csv.rfind("scenario,N,algorithm,trial,lifetime_slots,normalized\n", 0) == 0);

  const std::string series = slurp(dir / "a" / "series.csv");
  CHECK(count_lines(series) == 1 + 2 * 2 * 4);
  CHECK(series.rfind("scenario,N,algorithm,mean_lifetime_slots,normalized\n", 0) == 0);

  args.common.out_dir = (dir / "b").string();
  run_simulate(args, log);
  CHECK(slurp(dir / "b" / "comparison.csv") == csv);
  CHECK(slurp(dir / "b" / "series.csv") == series);

  // every data row parses back against the schema
  std::istringstream rows(csv);
  std::string line;
  std::getline(rows, line);
  while (std::getline(rows, line)) {
    std::istringstream fields(line);
    std::string scenario, n, algorithm, trial, slots, normalized;
    REQUIRE(std::getline(fields, scenario, ','));
    REQUIRE(std::getline(fields, n, ','));
    REQUIRE(std::getline(fields, algorithm, ','));
    REQUIRE(std::getline(fields, trial, ','));
    REQUIRE(std::getline(fields, slots, ','));
    REQUIRE(std::getline(fields, normalized));
    parse_placement(scenario);
    parse_algorithm(algorithm);
    CHECK(std::stoll(slots) >= 0);
    CHECK(std::stod(normalized) <= 1.0);
  }
}

TEST_CASE("scenario flag restricts the scenario list") {
  const auto dir = fresh_dir("scenario_flag");
  SimulateArgs args;
  args.common.out_dir = (dir / "out").string();
  args.common.seed = 3;
  args.trials = 2;
  args.scenario = "corner";
  const auto config_path = write_file(dir, "sim.ini",
                                      "[deployment]\n"
                                      "area_width = 40\n"
                                      "area_height = 40\n"
                                      "[simulate]\n"
                                      "node_counts = 6\n");
  args.config_path = config_path.string();
  std::ostringstream log;
  run_simulate(args, log);
  const std::string csv = slurp(dir / "out" / "comparison.csv");
  CHECK(count_lines(csv) == 1 + 1 * 1 * 2 * 4);
  CHECK(csv.find("center,") == std::string::npos);
}

TEST_CASE("rounds command emits baseline and per-round rows") {
  const auto dir = fresh_dir("rounds");
  const auto config_path = write_file(dir, "rounds.ini",
                                      "[rounds]\n"
                                      "node_count = 10\n"
                                      "rounds = 4\n"
                                      "packets_per_node = 5000\n"
                                      "seed = 11\n");
  RoundsArgs args;
  args.config_path = config_path.string();
  args.common.out_dir = (dir / "out").string();
  std::ostringstream log;
  run_rounds(args, log);

  const std::string csv = slurp(dir / "out" / "rounds.csv");
  CHECK(csv.rfind("round,algorithm,jain_index,max_load\n", 0) == 0);
  // 3 algorithms x (1 baseline + 4 rounds)
  CHECK(count_lines(csv) == 1 + 3 * 5);
  CHECK(csv.find("0,bdct,1,0\n") != std::string::npos);  // equal batteries: jain exactly 1
  CHECK(csv.find("0,spt,1,0\n") != std::string::npos);
  CHECK(csv.find("0,rdct,1,0\n") != std::string::npos);
}

TEST_CASE("gadget command verdicts, witness, and guard behavior") {
  const auto dir = fresh_dir("gadget");
  const auto coverable = write_file(dir, "yes.sc",
                                    "universe 2\n"
                                    "subset 1 1 2\n"
                                    "subset 2 2\n"
                                    "budget 1\n"
                                    "sensor_a 0\n");
  GadgetArgs args;
  args.instance_path = coverable.string();
  args.common.out_dir = (dir / "yes").string();
  std::ostringstream log;
  run_gadget(args, log);
  CHECK(log.str() == "cover: yes, lifetime-1 tree: yes, witness written\n");
  CHECK(slurp(dir / "yes" / "verdict.txt") == "cover: yes\nlifetime-1 tree: yes\n");

  auto instance = load_set_cover(coverable.string());
  auto gadget = build_gadget(instance);
  std::ifstream witness_in(dir / "yes" / "witness_tree.csv");
  auto witness = parse_tree_csv(witness_in, gadget.graph);
  CHECK(gadget_lifetime_exactly_one(gadget, witness));

  const auto uncoverable = write_file(dir, "no.sc",
                                      "universe 2\n"
                                      "subset 1 1\n"
                                      "subset 2 1\n"
                                      "budget 2\n"
                                      "sensor_a 1\n");
  args.instance_path = uncoverable.string();
  args.common.out_dir = (dir / "no").string();
  std::ostringstream log2;
  run_gadget(args, log2);
  CHECK(log2.str() == "cover: no, lifetime-1 tree: no\n");
  CHECK_FALSE(fs::exists(dir / "no" / "witness_tree.csv"));

  // oversized: guard error, exit code 2, nothing written
  std::string big = "universe 20\nsubset 1";
  for (int e = 1; e <= 20; ++e) big += " " + std::to_string(e);
  big += "\nbudget 1\nsensor_a 0\n";
  const auto oversized = write_file(dir, "big.sc", big);
  args.instance_path = oversized.string();
  args.common.out_dir = (dir / "big").string();
  std::ostringstream log3, err;
  const int code = run_with_exit_code([&] { run_gadget(args, log3); }, err);
  CHECK(code == 2);
  CHECK_FALSE(fs::exists(dir / "big" / "verdict.txt"));
}

TEST_CASE("manifest records the run inputs") {
  const auto dir = fresh_dir("manifest");
  SimulateArgs args;
  args.common.out_dir = (dir / "out").string();
  args.common.seed = 42;
  args.trials = 1;
  const auto config_path = write_file(dir, "sim.ini",
                                      "[deployment]\n"
                                      "area_width = 40\n"
                                      "area_height = 40\n"
                                      "[simulate]\n"
                                      "node_counts = 6\n"
                                      "scenarios = center\n");
  args.config_path = config_path.string();
  std::ostringstream log;
  run_simulate(args, log);
  const std::string manifest = slurp(dir / "out" / "manifest.json");
  CHECK(manifest.find("\"command\": \"simulate\"") != std::string::npos);
  CHECK(manifest.find("\"seed\": 42") != std::string::npos);
  CHECK(manifest.find("\"tool_version\": \"ccast 0.1.0\"") != std::string::npos);
}
