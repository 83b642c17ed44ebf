#include "ccast/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>
#include <stdexcept>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ccast/rng.hpp"
#include "ccast/spanning.hpp"

namespace ccast {

PartialTree PartialTree::start(const ConnectivityGraph& graph) {
  PartialTree s;
  s.covered.assign(graph.node_count(), 0);
  s.depth.assign(graph.node_count(), 0);
  s.child_count.assign(graph.node_count(), 0);
  s.covered[kSink] = 1;
  return s;
}

void PartialTree::attach(NodeId uncovered, NodeId covered_parent) {
  covered[uncovered] = 1;
  depth[uncovered] = depth[covered_parent] + 1;
  ++child_count[covered_parent];
}

FrontierEdge bdct_score(NodeId u, NodeId v, const ConnectivityGraph& graph,
                        const PartialTree& state, const EnergyParams& params) {
  if (state.covered[u]) throw std::invalid_argument("node u is already covered");
  if (!state.covered[v]) throw std::invalid_argument("node v is not covered");
  const double c_avg = params.c_avg();
  const double cost = graph.edge_cost(u, v);
  const int h_v = state.depth[v];
  const int alpha_v = state.child_count[v];

  FrontierEdge e;
  e.uncovered = u;
  e.covered = v;
  e.first_term = graph.battery_mj(u) / (cost + h_v * c_avg + graph.sensor_energy_mj(u));
  if (v == kSink) {
    e.second_term = kInfiniteEnergy;
  } else {
    const int packets = tx_packet_count(alpha_v + 1, params);  // ceil((alpha_v + 2) l / beta)
    e.second_term = graph.battery_mj(v) / (h_v * c_avg * packets +
                                           (alpha_v + 1) * params.rx_energy_mj +
                                           graph.sensor_energy_mj(v));
  }
  e.score = std::min(e.first_term, e.second_term);
  return e;
}

bool scores_tie(double a, double b) {
  if (a == b) return true;  // covers the two-infinities case
  if (std::isinf(a) || std::isinf(b)) return false;
  return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
}

bool frontier_edge_preferred(const FrontierEdge& a, const FrontierEdge& b) {
  if (!scores_tie(a.score, b.score)) return a.score > b.score;
  const double a_other = std::max(a.first_term, a.second_term);
  const double b_other = std::max(b.first_term, b.second_term);
  if (!scores_tie(a_other, b_other)) return a_other > b_other;
  return std::pair(a.uncovered, a.covered) < std::pair(b.uncovered, b.covered);
}

namespace {

// Frontier edges in canonical order: graph edge order, covered endpoint
// second. The scoring loop is the parallel kernel; selection folds serially
// over the array so results do not depend on thread count.
std::vector<std::pair<NodeId, NodeId>> frontier_edges(const ConnectivityGraph& graph,
                                                      const PartialTree& state) {
  std::vector<std::pair<NodeId, NodeId>> frontier;
  for (const auto& e : graph.edges()) {
    const bool cu = state.covered[e.u];
    const bool cv = state.covered[e.v];
    if (cu == cv) continue;
    if (cv)
      frontier.emplace_back(e.u, e.v);
    else
      frontier.emplace_back(e.v, e.u);
  }
  return frontier;
}

void score_frontier(const ConnectivityGraph& graph, const PartialTree& state,
                    const EnergyParams& params,
                    const std::vector<std::pair<NodeId, NodeId>>& frontier,
                    std::vector<FrontierEdge>& scored, Execution exec) {
  scored.resize(frontier.size());
  const auto n = static_cast<std::ptrdiff_t>(frontier.size());
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static) if (n > 256)
    for (std::ptrdiff_t i = 0; i < n; ++i)
      scored[i] = bdct_score(frontier[i].first, frontier[i].second, graph, state, params);
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i)
      scored[i] = bdct_score(frontier[i].first, frontier[i].second, graph, state, params);
  }
}

}  // namespace

BdctResult bdct_build(const ConnectivityGraph& graph, const EnergyParams& params,
                      Execution exec) {
  if (!graph.connected()) throw InputError("bdct: graph is not connected");
  params.validate();
  const int n = graph.sensor_count();
  PartialTree state = PartialTree::start(graph);
  std::vector<NodeId> parent(graph.node_count(), kSink);
  BuildTrace trace;
  trace.reserve(n);
  std::vector<FrontierEdge> scored;

  for (int iteration = 1; iteration <= n; ++iteration) {
    const auto frontier = frontier_edges(graph, state);
    if (frontier.empty()) throw InputError("bdct: ran out of frontier edges");
    score_frontier(graph, state, params, frontier, scored, exec);

    std::size_t best = 0;
    for (std::size_t i = 1; i < scored.size(); ++i)
      if (frontier_edge_preferred(scored[i], scored[best])) best = i;

    bool tied = false;
    for (std::size_t i = 0; i < scored.size() && !tied; ++i)
      tied = i != best && scores_tie(scored[i].score, scored[best].score);

    const FrontierEdge& pick = scored[best];
    parent[pick.uncovered] = pick.covered;
    state.attach(pick.uncovered, pick.covered);
    trace.push_back({iteration, pick.uncovered, pick.covered, pick.score, tied});
  }
  return {CollectionTree(graph, std::move(parent)), std::move(trace)};
}

CollectionTree spt_build(const ConnectivityGraph& graph) {
  if (!graph.connected()) throw InputError("spt: graph is not connected");
  const int nodes = graph.node_count();
  std::vector<double> dist(nodes, kInfiniteEnergy);
  std::vector<char> done(nodes, 0);
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[kSink] = 0.0;
  queue.emplace(0.0, kSink);
  while (!queue.empty()) {
    auto [d, u] = queue.top();
    queue.pop();
    if (done[u]) continue;
    done[u] = 1;
    for (const auto& [v, cost] : graph.neighbors(u)) {
      if (dist[u] + cost < dist[v]) {
        dist[v] = dist[u] + cost;
        queue.emplace(dist[v], v);
      }
    }
  }

  // Deterministic parents: smallest id among predecessors on a shortest path.
  std::vector<NodeId> parent(nodes, kSink);
  for (NodeId u = 1; u < nodes; ++u) {
    NodeId chosen = -1;
    for (const auto& [v, cost] : graph.neighbors(u)) {
      if (dist[v] + cost == dist[u] && (chosen == -1 || v < chosen)) chosen = v;
    }
    if (chosen == -1) throw InputError("spt: node unreachable from the sink");
    parent[u] = chosen;
  }
  return CollectionTree(graph, std::move(parent));
}

CollectionTree mst_build(const ConnectivityGraph& graph) {
  if (!graph.connected()) throw InputError("mst: graph is not connected");
  const int nodes = graph.node_count();
  std::vector<GraphEdge> edges(graph.edges().begin(), graph.edges().end());
  std::sort(edges.begin(), edges.end(), [](const GraphEdge& a, const GraphEdge& b) {
    return std::tuple(a.cost_mj, a.u, a.v) < std::tuple(b.cost_mj, b.u, b.v);
  });
  std::vector<NodeId> dsu(nodes);
  for (NodeId u = 0; u < nodes; ++u) dsu[u] = u;
  auto find = [&](NodeId x) {
    while (dsu[x] != x) x = dsu[x] = dsu[dsu[x]];
    return x;
  };

  std::vector<std::vector<std::pair<NodeId, NodeId>>> chosen(nodes);
  int picked = 0;
  for (const auto& e : edges) {
    NodeId a = find(e.u), b = find(e.v);
    if (a == b) continue;
    dsu[a] = b;
    chosen[e.u].emplace_back(e.v, 0);
    chosen[e.v].emplace_back(e.u, 0);
    if (++picked == nodes - 1) break;
  }

  std::vector<NodeId> parent(nodes, kSink);
  std::vector<char> seen(nodes, 0);
  std::queue<NodeId> bfs;
  bfs.push(kSink);
  seen[kSink] = 1;
  while (!bfs.empty()) {
    NodeId u = bfs.front();
    bfs.pop();
    for (const auto& [v, unused] : chosen[u]) {
      if (seen[v]) continue;
      seen[v] = 1;
      parent[v] = u;
      bfs.push(v);
    }
  }
  return CollectionTree(graph, std::move(parent));
}

CollectionTree rdct_build(const ConnectivityGraph& graph, std::uint64_t seed) {
  if (!graph.connected()) throw InputError("rdct: graph is not connected");
  const int n = graph.sensor_count();
  PartialTree state = PartialTree::start(graph);
  std::vector<NodeId> parent(graph.node_count(), kSink);
  std::mt19937_64 rng(seed);
  for (int step = 0; step < n; ++step) {
    const auto frontier = frontier_edges(graph, state);
    if (frontier.empty()) throw InputError("rdct: ran out of frontier edges");
    const auto pick = frontier[bounded_uniform(rng, frontier.size())];
    parent[pick.first] = pick.second;
    state.attach(pick.first, pick.second);
  }
  return CollectionTree(graph, std::move(parent));
}

namespace {

struct OracleBest {
  double lifetime = -1.0;
  std::vector<NodeId> parent;
  std::uint64_t examined = 0;

  void consider(double life, std::span<const NodeId> candidate) {
    ++examined;
    if (life > lifetime ||
        (life == lifetime && std::lexicographical_compare(candidate.begin(), candidate.end(),
                                                          parent.begin(), parent.end()))) {
      lifetime = life;
      parent.assign(candidate.begin(), candidate.end());
    }
  }

  void merge(const OracleBest& other) {
    examined += other.examined;
    if (other.lifetime > lifetime ||
        (other.lifetime == lifetime && !other.parent.empty() &&
         std::lexicographical_compare(other.parent.begin(), other.parent.end(), parent.begin(),
                                      parent.end()))) {
      lifetime = other.lifetime;
      parent = other.parent;
    }
  }
};

// Same arithmetic as node_lifetime/tree_lifetime, but on enumerator views.
struct ViewEvaluator {
  const ConnectivityGraph& graph;
  const EnergyParams& params;
  std::vector<int> tx, rx;

  explicit ViewEvaluator(const ConnectivityGraph& g, const EnergyParams& p)
      : graph(g), params(p), tx(g.node_count(), 0), rx(g.node_count(), 0) {}

  double lifetime(const SpanningTreeView& view) {
    const int nodes = graph.node_count();
    std::fill(rx.begin(), rx.end(), 0);
    for (NodeId u = 1; u < nodes; ++u) {
      tx[u] = tx_packet_count(view.desc[u], params);
      rx[view.parent[u]] += tx[u];
    }
    double worst = kInfiniteEnergy;
    for (NodeId u = 1; u < nodes; ++u) {
      const double denom = rx[u] * params.rx_energy_mj + tx[u] * view.parent_cost[u] +
                           graph.sensor_energy_mj(u);
      worst = std::min(worst, graph.battery_mj(u) / denom);
    }
    return worst;
  }
};

}  // namespace

OracleResult exhaustive_optimal(const ConnectivityGraph& graph, const EnergyParams& params,
                                const OracleOptions& options) {
  if (graph.sensor_count() > options.max_sensor_nodes)
    throw GuardError("graph too large for exact search: " + std::to_string(graph.sensor_count()) +
                     " sensor nodes exceeds the limit of " +
                     std::to_string(options.max_sensor_nodes));
  if (!graph.connected()) throw InputError("oracle: graph is not connected");
  params.validate();

  SpanningTreeEnumerator enumerator(graph);
  OracleBest best;

  if (options.exec == Execution::parallel) {
#ifdef _OPENMP
    const auto chunks = enumerator.split(static_cast<std::size_t>(omp_get_max_threads()) * 8);
    std::vector<OracleBest> partial(chunks.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(chunks.size()); ++i) {
      ViewEvaluator eval(graph, params);
      enumerator.enumerate(chunks[i], [&](const SpanningTreeView& view) {
        partial[i].consider(eval.lifetime(view), view.parent);
        return true;
      });
    }
    for (const auto& p : partial) best.merge(p);
#else
    ViewEvaluator eval(graph, params);
    enumerator.enumerate([&](const SpanningTreeView& view) {
      best.consider(eval.lifetime(view), view.parent);
      return true;
    });
#endif
  } else {
    ViewEvaluator eval(graph, params);
    enumerator.enumerate([&](const SpanningTreeView& view) {
      best.consider(eval.lifetime(view), view.parent);
      return true;
    });
  }

  if (best.parent.empty()) throw InputError("oracle: no spanning tree found");
  return {CollectionTree(graph, std::move(best.parent)), best.lifetime, best.examined};
}

}  // namespace ccast
