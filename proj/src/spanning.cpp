#include "ccast/spanning.hpp"

#include <deque>

namespace ccast {
namespace {

NodeId state_find(const SpanningTreeEnumerator::State& s, NodeId x) {
  while (s.dsu_parent[x] != x) x = s.dsu_parent[x];
  return x;
}

bool state_connectable(const SpanningTreeEnumerator::State& s, std::span<const GraphEdge> edges) {
  std::vector<NodeId> probe = s.dsu_parent;
  auto probe_find = [&](NodeId x) {
    while (probe[x] != x) x = probe[x];
    return x;
  };
  int comps = s.components;
  for (std::size_t i = 0; i < edges.size() && comps > 1; ++i) {
    if (s.deleted[i]) continue;
    NodeId a = probe_find(edges[i].u);
    NodeId b = probe_find(edges[i].v);
    if (a != b) {
      probe[a] = b;
      --comps;
    }
  }
  return comps == 1;
}

}  // namespace

std::vector<SpanningTreeEnumerator::State> SpanningTreeEnumerator::split(
    std::size_t min_chunks) const {
  std::deque<State> open;
  std::vector<State> chunks;
  open.push_back(initial_state());
  while (!open.empty() && open.size() + chunks.size() < min_chunks) {
    State s = std::move(open.front());
    open.pop_front();
    if (s.components == 1) {
      chunks.push_back(std::move(s));
      continue;
    }
    int i = s.cursor;
    NodeId ru = 0, rv = 0;
    for (; i < static_cast<int>(edges_.size()); ++i) {
      if (s.deleted[i]) continue;
      ru = state_find(s, edges_[i].u);
      rv = state_find(s, edges_[i].v);
      if (ru != rv) break;
    }
    if (i == static_cast<int>(edges_.size())) continue;  // dead branch

    State include = s;
    if (include.dsu_size[ru] < include.dsu_size[rv]) std::swap(ru, rv);
    include.dsu_parent[rv] = ru;
    include.dsu_size[ru] += include.dsu_size[rv];
    include.selected.push_back(i);
    --include.components;
    include.cursor = i + 1;
    open.push_back(std::move(include));

    State exclude = std::move(s);
    exclude.deleted[i] = 1;
    exclude.cursor = i + 1;
    if (state_connectable(exclude, edges_)) open.push_back(std::move(exclude));
  }
  for (auto& s : open) chunks.push_back(std::move(s));
  return chunks;
}

}  // namespace ccast
