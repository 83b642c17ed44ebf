#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "ccast/rng.hpp"
#include "ccast/sim.hpp"
#include "helpers.hpp"

using namespace ccast;
using namespace ccast::testing;

namespace {

DeploymentConfig small_deployment(int n, std::uint64_t seed) {
  DeploymentConfig d;
  d.area_width_m = 40.0;
  d.area_height_m = 40.0;
  d.node_count = n;
  d.seed = seed;
  return d;
}

}  // namespace

TEST_CASE("edge cost picks the minimum sufficient power level") {
  std::vector<PowerLevel> levels{{12.0, 0.7}, {25.0, 1.287}};
  CHECK(edge_cost_for_distance(levels, 10.0) == doctest::Approx(0.7));
  CHECK(edge_cost_for_distance(levels, 12.0) == doctest::Approx(0.7));
  CHECK(edge_cost_for_distance(levels, 12.5) == doctest::Approx(1.287));
  CHECK_THROWS_AS(edge_cost_for_distance(levels, 30.0), InputError);
}

TEST_CASE("default power table is anchored to the radio measurements") {
  const auto levels = EnergyParams::default_power_levels(25.0);
  REQUIRE(levels.size() == 8);
  CHECK(levels.back().range_m == doctest::Approx(25.0));
  CHECK(levels.back().tx_energy_mj == doctest::Approx(1.287));
  CHECK(levels.front().tx_energy_mj == doctest::Approx(1.287 * 10.0 / 18.33));
  EnergyParams defaults = EnergyParams::defaults();
  CHECK(defaults.c_avg() == doctest::Approx((1.287 + 1.287 * 10.0 / 18.33) / 2.0));
  CHECK(defaults.rx_energy_mj == doctest::Approx(1.452));
  CHECK(defaults.data_unit_bytes == 100);
  CHECK(defaults.packet_capacity_bytes == 114);
  defaults.validate();
}

TEST_CASE("geometric graphs: geometry, costs, determinism") {
  auto config = small_deployment(12, 77);
  auto geo = generate_geometric_graph(config);
  CHECK(geo.graph.sensor_count() == 12);
  CHECK(geo.graph.connected());
  CHECK(geo.positions[kSink].x == doctest::Approx(20.0));
  CHECK(geo.positions[kSink].y == doctest::Approx(20.0));
  for (NodeId u = 1; u <= 12; ++u) {
    CHECK(geo.positions[u].x >= 0.0);
    CHECK(geo.positions[u].x <= config.area_width_m);
    CHECK(geo.positions[u].y >= 0.0);
    CHECK(geo.positions[u].y <= config.area_height_m);
    CHECK(geo.graph.battery_mj(u) == doctest::Approx(config.initial_battery_mj));
  }
  for (const auto& e : geo.graph.edges()) {
    const double d = std::hypot(geo.positions[e.u].x - geo.positions[e.v].x,
                                geo.positions[e.u].y - geo.positions[e.v].y);
    CHECK(d <= config.max_range_m);
    CHECK(e.cost_mj == doctest::Approx(edge_cost_for_distance(config.power_levels, d)));
  }
  // no edge may span more than the maximum range
  for (NodeId u = 0; u <= 12; ++u)
    for (NodeId v = u + 1; v <= 12; ++v) {
      const double d = std::hypot(geo.positions[u].x - geo.positions[v].x,
                                  geo.positions[u].y - geo.positions[v].y);
      if (d > config.max_range_m) CHECK_FALSE(geo.graph.has_edge(u, v));
    }

  auto again = generate_geometric_graph(config);
  CHECK(again.graph.edges().size() == geo.graph.edges().size());
  for (std::size_t i = 0; i < again.graph.edges().size(); ++i)
    CHECK(again.graph.edges()[i].cost_mj == geo.graph.edges()[i].cost_mj);

  config.root_placement = RootPlacement::corner;
  auto corner = generate_geometric_graph(config);
  CHECK(corner.positions[kSink].x == 0.0);
  CHECK(corner.positions[kSink].y == 0.0);

  config.battery_jitter = 0.005;
  auto jittered = generate_geometric_graph(config);
  for (NodeId u = 1; u <= 12; ++u) {
    CHECK(jittered.graph.battery_mj(u) >= config.initial_battery_mj * 0.995);
    CHECK(jittered.graph.battery_mj(u) <= config.initial_battery_mj * 1.005);
  }
}

TEST_CASE("jain index: exact anchors and algebra") {
  std::vector<double> constant(20, 29304.0);
  CHECK(jain_index(constant) == 1.0);
  std::vector<double> split{5.0, 5.0, 5.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  CHECK(jain_index(split) == 3.0 / 10.0);  // p/n with integer values is exact
  std::vector<double> pair{1.0, 0.0};
  CHECK(jain_index(pair) == 0.5);

  CHECK_THROWS_AS(jain_index(std::vector<double>{0.0, 0.0}), InputError);
  CHECK_THROWS_AS(jain_index(std::vector<double>{}), InputError);
  CHECK_THROWS_AS(jain_index(std::vector<double>{-1.0, 2.0}), InputError);

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x(3 + bounded_uniform(rng, 10));
    for (auto& v : x) v = uniform01(rng) * 10.0;
    const double j = jain_index(x);
    CHECK(j > 0.0);
    CHECK(j <= 1.0 + 1e-15);
    std::vector<double> scaled = x;
    for (auto& v : scaled) v *= 4.0;  // power of two: exact
    CHECK(jain_index(scaled) == j);
    std::vector<double> scaled_odd = x;
    for (auto& v : scaled_odd) v *= 3.7;
    CHECK(jain_index(scaled_odd) == doctest::Approx(j).epsilon(1e-12));
  }
}

TEST_CASE("single-node lifetime is floor(B / E)") {
  // per-slot energy: 1 packet * 1.5 + k 0.5 = 2.0
  auto graph = make_graph(1, {10.0}, {0.5}, {{0, 1, 1.5}});
  auto params = make_params(0.0, 10, 10, 1.0);
  auto run = simulate_lifetime(graph, params, Algorithm::spt, 10000, 1);
  CHECK(run.lifetime_slots == 5);
  CHECK(run.tree_builds == 1);
  CHECK(run.final_batteries[0] == doctest::Approx(0.0));
}

TEST_CASE("lifetime equals floor(tree_lifetime) when no rebuild happens") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 10; ++trial) {
    auto geo = generate_geometric_graph(small_deployment(8, 100 + trial));
    auto params = EnergyParams::defaults();
    for (Algorithm algorithm : {Algorithm::spt, Algorithm::mst}) {
      auto tree = build_tree(geo.graph, params, algorithm, 0);
      const double life = tree_lifetime(tree, geo.graph, params);
      auto run = simulate_lifetime(geo.graph, params, algorithm,
                                   static_cast<std::uint64_t>(life) + 10, trial);
      CHECK(run.lifetime_slots == static_cast<std::uint64_t>(std::floor(life)));
    }
  }
}

TEST_CASE("fast-forward equals slot-by-slot exactly on small instances") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto config = small_deployment(6, 500 + seed);
    config.initial_battery_mj = 2000.0 + 137.0 * static_cast<double>(seed);
    config.battery_jitter = 0.004;
    auto geo = generate_geometric_graph(config);
    auto params = EnergyParams::defaults();
    for (Algorithm algorithm : {Algorithm::bdct, Algorithm::spt, Algorithm::rdct}) {
      auto fast = simulate_lifetime(geo.graph, params, algorithm, 50, seed);
      auto slow = simulate_lifetime(geo.graph, params, algorithm, 50, seed,
                                    DrainMode::slot_by_slot);
      CHECK(fast.lifetime_slots == slow.lifetime_slots);
      CHECK(fast.tree_builds == slow.tree_builds);
    }
  }
}

TEST_CASE("batteries only decrease, and by exactly the drained energy") {
  auto geo = generate_geometric_graph(small_deployment(8, 321));
  auto params = EnergyParams::defaults();
  auto run = simulate_lifetime(geo.graph, params, Algorithm::bdct, 400, 3);
  REQUIRE(!run.checkpoints.empty());
  std::vector<double> previous(8);
  for (int i = 0; i < 8; ++i) previous[i] = geo.graph.battery_mj(i + 1);
  std::uint64_t previous_slot = 0;
  for (std::size_t w = 0; w < run.checkpoints.size(); ++w) {
    const auto& [slot, batteries] = run.checkpoints[w];
    const std::uint64_t steps = slot - previous_slot;
    CollectionTree tree(geo.graph, run.tree_snapshots[w]);
    for (int i = 0; i < 8; ++i) {
      CHECK(batteries[i] <= previous[i]);
      const double need =
          per_slot_energy(tree, geo.graph, i + 1, params).total_mj * static_cast<double>(steps);
      CHECK(previous[i] - batteries[i] == doctest::Approx(need).epsilon(1e-9));
    }
    previous = batteries;
    previous_slot = slot;
  }
}

TEST_CASE("bdct outlives rdct on average") {
  auto params = EnergyParams::defaults();
  double bdct_total = 0.0, rdct_total = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    DeploymentConfig config;  // stock 100x100, N=50
    config.node_count = 50;
    config.seed = 9000 + seed;
    auto geo = generate_geometric_graph(config);
    bdct_total += static_cast<double>(
        simulate_lifetime(geo.graph, params, Algorithm::bdct, 10000, seed).lifetime_slots);
    rdct_total += static_cast<double>(
        simulate_lifetime(geo.graph, params, Algorithm::rdct, 10000, seed).lifetime_slots);
  }
  CHECK(bdct_total / 10.0 > rdct_total / 10.0);
}

TEST_CASE("rounds experiment: packet accounting and halting") {
  // chain 0 <- 1 <- 2 <- 3: node 1 has two descendants
  auto graph = make_graph(3, {1e9, 1e9, 1e9}, {1.0, 1.0, 1.0},
                          {{0, 1, 2.0}, {1, 2, 1.0}, {2, 3, 1.0}});
  auto params = make_params(0.5, 100, 100, 1.0);
  auto result = rounds_experiment(graph, params, Algorithm::spt, 1, 30000, 1);
  REQUIRE(result.rounds.size() == 1);
  CHECK(result.initial_jain == 1.0);
  CHECK(result.rounds[0].max_load == 3);
  // node 1 sends 3 * 30000 = 90000 packets at cost 2 and receives 60000 at 0.5
  const double expected_drain = 90000.0 * 2.0 + 60000.0 * 0.5 + 1.0;
  CHECK(1e9 - result.rounds[0].batteries_after[0] == doctest::Approx(expected_drain));

  // batteries too small to finish a round: halts with no completed rounds
  auto broke = make_graph(1, {10.0}, {0.0}, {{0, 1, 1.0}});
  auto halted = rounds_experiment(broke, params, Algorithm::spt, 3, 30000, 1);
  CHECK(halted.halted_early);
  CHECK(halted.rounds.empty());
}

TEST_CASE("rounds on a geometric graph: jain falls, bdct stays most balanced") {
  auto params = EnergyParams::defaults();
  const int seeds = 3, rounds = 7;
  std::vector<double> final_jain(3, 0.0);  // bdct, spt, rdct
  const Algorithm algorithms[] = {Algorithm::bdct, Algorithm::spt, Algorithm::rdct};
  for (int seed = 0; seed < seeds; ++seed) {
    DeploymentConfig config;
    config.initial_battery_mj = 29304000.0;  // full capacity survives 7 rounds
    config.node_count = 20;
    config.seed = 400 + seed;
    auto geo = generate_geometric_graph(config);
    for (int a = 0; a < 3; ++a) {
      auto result = rounds_experiment(geo.graph, params, algorithms[a], rounds, 30000, seed);
      REQUIRE(static_cast<int>(result.rounds.size()) == rounds);
      CHECK(result.rounds.front().jain <= result.initial_jain);
      final_jain[a] += result.rounds.back().jain;
    }
  }
  CHECK(final_jain[0] >= final_jain[1]);  // bdct at least as fair as spt
  CHECK(final_jain[1] >= final_jain[2]);  // spt at least as fair as rdct
}

TEST_CASE("comparison table: normalization, determinism, parallel equivalence") {
  CompareConfig config;
  config.node_counts = {8, 12};
  config.trials = 3;
  config.master_seed = 5;
  config.deployment = small_deployment(8, 0);
  config.deployment.initial_battery_mj = 29304.0;

  auto table = compare_algorithms(config);
  REQUIRE(table.cells.size() == 2 * 2 * 4);
  for (std::size_t base = 0; base < table.cells.size(); base += 4) {
    double best = 0.0;
    bool saw_one = false;
    for (std::size_t i = 0; i < 4; ++i) {
      best = std::max(best, table.cells[base + i].normalized);
      saw_one |= table.cells[base + i].normalized == 1.0;
    }
    CHECK(best == 1.0);
    CHECK(saw_one);
  }

  auto again = compare_algorithms(config);
  for (std::size_t i = 0; i < table.cells.size(); ++i) {
    CHECK(table.cells[i].trial_lifetimes == again.cells[i].trial_lifetimes);
    CHECK(table.cells[i].normalized == again.cells[i].normalized);
  }

  config.exec = Execution::serial;
  auto serial = compare_algorithms(config);
  for (std::size_t i = 0; i < table.cells.size(); ++i)
    CHECK(table.cells[i].trial_lifetimes == serial.cells[i].trial_lifetimes);

  CompareConfig solo = config;
  solo.algorithms = {Algorithm::mst};
  for (const auto& cell : compare_algorithms(solo).cells) CHECK(cell.normalized == 1.0);
}

TEST_CASE("deployment validation") {
  DeploymentConfig config;
  config.node_count = 0;
  CHECK_THROWS_AS(config.validate(), InputError);
  config = DeploymentConfig{};
  config.max_range_m = 30.0;  // beyond the largest table range
  CHECK_THROWS_AS(config.validate(), InputError);
  config = DeploymentConfig{};
  config.battery_jitter = 0.6;
  CHECK_THROWS_AS(config.validate(), InputError);
}
