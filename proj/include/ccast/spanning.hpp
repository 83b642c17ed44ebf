#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ccast/model.hpp"

namespace ccast {

// One spanning tree, rooted at the sink, handed to enumeration visitors.
// Spans point into enumerator scratch and are only valid during the visit.
struct SpanningTreeView {
  std::span<const NodeId> parent;
  std::span<const int> depth;
  std::span<const int> desc;
  std::span<const double> parent_cost;  // edge cost to parent, per non-sink node
  std::span<const int> edge_ids;        // indices into graph.edges()
};

// Enumerates every spanning tree of a connectivity graph exactly once via
// include/exclude branching on edges (contraction-deletion order). The walk
// follows the graph's canonical edge order, so visit order is deterministic.
// Work is O(#trees * E); callers are expected to guard instance sizes.
class SpanningTreeEnumerator {
 public:
  // A branch of the enumeration: union-find of contracted components plus
  // the set of excluded edges. Value type, cheap to copy, so branches can be
  // farmed out to worker threads.
  struct State {
    std::vector<NodeId> dsu_parent;
    std::vector<int> dsu_size;
    std::vector<char> deleted;
    std::vector<int> selected;
    int components = 0;
    int cursor = 0;
  };

  explicit SpanningTreeEnumerator(const ConnectivityGraph& graph)
      : nodes_(graph.node_count()), edges_(graph.edges().begin(), graph.edges().end()) {}

  State initial_state() const {
    State s;
    s.dsu_parent.resize(nodes_);
    for (NodeId u = 0; u < nodes_; ++u) s.dsu_parent[u] = u;
    s.dsu_size.assign(nodes_, 1);
    s.deleted.assign(edges_.size(), 0);
    s.selected.reserve(nodes_ - 1);
    s.components = nodes_;
    s.cursor = 0;
    return s;
  }

  // Expands the branch frontier breadth-first until at least `min_chunks`
  // independent subproblems exist (or nothing is left to split). Running
  // enumerate() over all returned states visits each spanning tree once.
  std::vector<State> split(std::size_t min_chunks) const;

  // Visits every spanning tree reachable from `state`. The visitor returns
  // false to stop the walk early; enumerate then returns false as well.
  template <class Visitor>
  bool enumerate(const State& state, Visitor&& visit) const {
    Walk walk{*this, state};
    return walk.run(visit);
  }

  template <class Visitor>
  bool enumerate(Visitor&& visit) const {
    return enumerate(initial_state(), visit);
  }

  std::uint64_t count() const {
    std::uint64_t n = 0;
    enumerate([&](const SpanningTreeView&) {
      ++n;
      return true;
    });
    return n;
  }

 private:
  struct Walk {
    const SpanningTreeEnumerator& owner;
    State state;
    // scratch for building views and checking connectivity
    std::vector<NodeId> parent, order;
    std::vector<int> depth, desc, edge_ids;
    std::vector<double> parent_cost;
    std::vector<NodeId> probe;
    std::vector<int> adj_head, adj_next, adj_to, adj_edge;

    Walk(const SpanningTreeEnumerator& e, const State& s) : owner(e), state(s) {
      const int n = e.nodes_;
      parent.assign(n, kSink);
      order.reserve(n);
      depth.assign(n, 0);
      desc.assign(n, 0);
      edge_ids.assign(n - 1, 0);
      parent_cost.assign(n, 0.0);
      probe.assign(n, 0);
      adj_head.assign(n, -1);
      adj_next.assign(2 * (n - 1), -1);
      adj_to.assign(2 * (n - 1), 0);
      adj_edge.assign(2 * (n - 1), 0);
    }

    template <class Visitor>
    bool run(Visitor&& visit) {
      if (state.components == 1) return emit(visit);
      const auto& edges = owner.edges_;
      int i = state.cursor;
      NodeId ru = 0, rv = 0;
      for (; i < static_cast<int>(edges.size()); ++i) {
        if (state.deleted[i]) continue;
        ru = find(edges[i].u);
        rv = find(edges[i].v);
        if (ru != rv) break;
      }
      if (i == static_cast<int>(edges.size())) return true;  // dead branch

      // include edges[i]
      const int saved_cursor = state.cursor;
      NodeId child = unite(ru, rv);
      state.selected.push_back(i);
      --state.components;
      state.cursor = i + 1;
      if (!run(visit)) return false;
      ++state.components;
      state.selected.pop_back();
      undo(child);

      // exclude edges[i], unless that disconnects the remainder
      state.deleted[i] = 1;
      if (connectable()) {
        state.cursor = i + 1;
        if (!run(visit)) {
          state.deleted[i] = 0;
          return false;
        }
      }
      state.deleted[i] = 0;
      state.cursor = saved_cursor;
      return true;
    }

    NodeId find(NodeId x) const {
      while (state.dsu_parent[x] != x) x = state.dsu_parent[x];
      return x;
    }

    // Returns the absorbed root so the union can be undone.
    NodeId unite(NodeId ra, NodeId rb) {
      if (state.dsu_size[ra] < state.dsu_size[rb]) std::swap(ra, rb);
      state.dsu_parent[rb] = ra;
      state.dsu_size[ra] += state.dsu_size[rb];
      return rb;
    }

    void undo(NodeId child) {
      NodeId root = state.dsu_parent[child];
      state.dsu_size[root] -= state.dsu_size[child];
      state.dsu_parent[child] = child;
    }

    bool connectable() {
      probe = state.dsu_parent;
      auto probe_find = [&](NodeId x) {
        while (probe[x] != x) x = probe[x];
        return x;
      };
      int comps = state.components;
      const auto& edges = owner.edges_;
      for (std::size_t i = 0; i < edges.size() && comps > 1; ++i) {
        if (state.deleted[i]) continue;
        NodeId a = probe_find(edges[i].u);
        NodeId b = probe_find(edges[i].v);
        if (a != b) {
          probe[a] = b;
          --comps;
        }
      }
      return comps == 1;
    }

    template <class Visitor>
    bool emit(Visitor&& visit) {
      const auto& edges = owner.edges_;
      // orient the selected edges away from the sink
      std::fill(adj_head.begin(), adj_head.end(), -1);
      int slot = 0;
      for (int id : state.selected) {
        const auto& e = edges[id];
        adj_to[slot] = e.v;
        adj_edge[slot] = id;
        adj_next[slot] = adj_head[e.u];
        adj_head[e.u] = slot++;
        adj_to[slot] = e.u;
        adj_edge[slot] = id;
        adj_next[slot] = adj_head[e.v];
        adj_head[e.v] = slot++;
      }
      std::fill(parent.begin(), parent.end(), NodeId{-1});
      order.clear();
      order.push_back(kSink);
      parent[kSink] = kSink;
      depth[kSink] = 0;
      for (std::size_t done = 0; done < order.size(); ++done) {
        NodeId u = order[done];
        for (int s = adj_head[u]; s != -1; s = adj_next[s]) {
          NodeId other = adj_to[s];
          if (parent[other] != -1) continue;
          parent[other] = u;
          depth[other] = depth[u] + 1;
          parent_cost[other] = edges[adj_edge[s]].cost_mj;
          order.push_back(other);
        }
      }
      std::fill(desc.begin(), desc.end(), 0);
      for (std::size_t i = order.size(); i-- > 1;) {
        NodeId u = order[i];
        desc[parent[u]] += desc[u] + 1;
      }
      std::copy(state.selected.begin(), state.selected.end(), edge_ids.begin());
      SpanningTreeView view{parent, depth, desc, parent_cost,
                            std::span<const int>(edge_ids.data(), state.selected.size())};
      return visit(static_cast<const SpanningTreeView&>(view));
    }
  };

  int nodes_;
  std::vector<GraphEdge> edges_;
};

}  // namespace ccast
