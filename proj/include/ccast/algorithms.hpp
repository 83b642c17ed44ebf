#pragma once

#include <cstdint>
#include <vector>

#include "ccast/model.hpp"

namespace ccast {

// Kernels that scan frontiers or enumerate trees come in two flavours: the
// serial one is the reference, the parallel one is the OpenMP production
// path. Both must return identical results; tests compare them.
enum class Execution { serial, parallel };

// Construction state of a greedy tree build: which nodes are covered, their
// hop depths, and per-node child counts (alpha).
struct PartialTree {
  std::vector<char> covered;
  std::vector<int> depth;
  std::vector<int> child_count;

  static PartialTree start(const ConnectivityGraph& graph);
  void attach(NodeId uncovered, NodeId covered_parent);
};

// A scored frontier edge. score = min(first_term, second_term);
// second_term is infinite when the covered endpoint is the sink.
struct FrontierEdge {
  NodeId uncovered = -1;
  NodeId covered = -1;
  double score = 0.0;
  double first_term = 0.0;
  double second_term = 0.0;
};

struct BuildStep {
  int iteration = 0;  // 1-based
  NodeId uncovered = -1;
  NodeId covered = -1;
  double score = 0.0;
  bool tie_break_used = false;
};
using BuildTrace = std::vector<BuildStep>;

struct BdctResult {
  CollectionTree tree;
  BuildTrace trace;
};

// Scores attaching uncovered u under covered v:
//   first  = B_u / (c_uv + h_v * C_avg + k_u)
//   second = B_v / (h_v * C_avg * ceil((alpha_v + 2) l / beta)
//                   + (alpha_v + 1) e_r + k_v),  infinite for the sink.
// Throws std::invalid_argument when u is covered or v is not.
FrontierEdge bdct_score(NodeId u, NodeId v, const ConnectivityGraph& graph,
                        const PartialTree& state, const EnergyParams& params);

// Two scored frontier edges tie when their scores agree to 1e-12 relative.
bool scores_tie(double a, double b);
// Selection order: higher score, then higher non-minimizing term, then
// smaller (uncovered, covered) id pair. Returns true when a is preferred.
bool frontier_edge_preferred(const FrontierEdge& a, const FrontierEdge& b);

// Greedy balanced-energy tree: repeatedly attaches the frontier-edge argmax
// of bdct_score until all nodes are covered.
BdctResult bdct_build(const ConnectivityGraph& graph, const EnergyParams& params,
                      Execution exec = Execution::parallel);

// Shortest path tree from the sink (Dijkstra over edge costs); equal-cost
// parents resolve to the smaller id.
CollectionTree spt_build(const ConnectivityGraph& graph);

// Minimum spanning tree (Kruskal, edges ordered by (cost, u, v)), rooted at
// the sink.
CollectionTree mst_build(const ConnectivityGraph& graph);

// Random tree: each step joins a uniformly random frontier edge.
CollectionTree rdct_build(const ConnectivityGraph& graph, std::uint64_t seed);

struct OracleOptions {
  int max_sensor_nodes = 9;
  Execution exec = Execution::parallel;
};

struct OracleResult {
  CollectionTree tree;
  double lifetime = 0.0;
  std::uint64_t trees_examined = 0;
};

// Exact optimum by enumerating every spanning tree. Ties resolve to the
// lexicographically smallest parent map, so the result is deterministic for
// both execution modes. Throws GuardError above the size limit.
OracleResult exhaustive_optimal(const ConnectivityGraph& graph, const EnergyParams& params,
                                const OracleOptions& options = {});

}  // namespace ccast
