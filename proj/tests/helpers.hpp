#pragma once

#include <random>
#include <tuple>
#include <vector>

#include "ccast/model.hpp"
#include "ccast/rng.hpp"

namespace ccast::testing {

struct EdgeSpec {
  int u;
  int v;
  double cost;
};

// batteries/sensor_energy cover sensors 1..n; the sink's values are implied.
inline ConnectivityGraph make_graph(int n, std::vector<double> batteries,
                                    std::vector<double> sensor_energy,
                                    std::vector<EdgeSpec> edge_specs) {
  std::vector<double> b(n + 1, 0.0);
  std::vector<double> k(n + 1, 0.0);
  b[kSink] = kInfiniteEnergy;
  for (int u = 1; u <= n; ++u) {
    b[u] = batteries[u - 1];
    k[u] = sensor_energy[u - 1];
  }
  std::vector<GraphEdge> edges;
  for (const auto& e : edge_specs)
    edges.push_back({static_cast<NodeId>(e.u), static_cast<NodeId>(e.v), e.cost});
  return ConnectivityGraph(n, std::move(b), std::move(k), std::move(edges));
}

// uniform batteries/energies, unit costs
inline ConnectivityGraph make_uniform_graph(int n, double battery, double k,
                                            std::vector<EdgeSpec> edges) {
  return make_graph(n, std::vector<double>(n, battery), std::vector<double>(n, k),
                    std::move(edges));
}

// EnergyParams with every field explicit (no power-level table needed).
inline EnergyParams make_params(double e_r, int l, int beta, double c_avg) {
  EnergyParams p;
  p.rx_energy_mj = e_r;
  p.data_unit_bytes = l;
  p.packet_capacity_bytes = beta;
  p.avg_tx_energy_mj = c_avg;
  return p;
}

// Random connected graph: a random spanning tree plus extra random edges,
// randomized batteries, costs, and sensor energies.
inline ConnectivityGraph random_connected_graph(std::mt19937_64& rng, int n,
                                                double extra_edge_prob = 0.5) {
  std::vector<EdgeSpec> edges;
  auto cost = [&] { return 0.5 + 2.5 * uniform01(rng); };
  for (int u = 1; u <= n; ++u)
    edges.push_back({static_cast<int>(bounded_uniform(rng, u)), u, cost()});
  for (int u = 0; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v) {
      bool present = false;
      for (const auto& e : edges) present |= (e.u == u && e.v == v) || (e.u == v && e.v == u);
      if (!present && uniform01(rng) < extra_edge_prob) edges.push_back({u, v, cost()});
    }
  std::vector<double> batteries(n), k(n);
  for (int i = 0; i < n; ++i) {
    batteries[i] = 5.0 + 45.0 * uniform01(rng);
    k[i] = 2.0 * uniform01(rng);
  }
  return make_graph(n, std::move(batteries), std::move(k), std::move(edges));
}

inline EnergyParams random_params(std::mt19937_64& rng) {
  const int beta = 20 + static_cast<int>(bounded_uniform(rng, 100));
  const int l = 1 + static_cast<int>(bounded_uniform(rng, beta));
  return make_params(2.0 * uniform01(rng), l, beta, 0.3 + 1.5 * uniform01(rng));
}

}  // namespace ccast::testing
