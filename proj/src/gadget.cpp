#include "ccast/gadget.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ccast/spanning.hpp"

namespace ccast {

Rational::Rational(long long n, long long d) : num(n), den(d) {
  if (den <= 0 || num < 0) throw InputError("rational must be non-negative with positive denominator");
  const long long g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

Rational Rational::parse(const std::string& text) {
  const auto dot = text.find('.');
  try {
    if (dot == std::string::npos) {
      std::size_t used = 0;
      long long whole = std::stoll(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return Rational(whole, 1);
    }
    const std::string whole_part = text.substr(0, dot);
    const std::string frac_part = text.substr(dot + 1);
    if (frac_part.empty() || frac_part.size() > 15 ||
        frac_part.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument(text);
    long long whole = whole_part.empty() ? 0 : std::stoll(whole_part);
    long long den = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) den *= 10;
    long long frac = std::stoll(frac_part);
    return Rational(whole * den + frac, den);
  } catch (const InputError&) {
    throw;
  } catch (const std::exception&) {
    throw InputError("cannot parse '" + text + "' as a non-negative rational");
  }
}

void SetCoverInstance::validate() const {
  if (universe_size < 1) throw InputError("set cover universe must have at least one element");
  if (subsets.empty()) throw InputError("set cover instance needs at least one subset");
  if (budget < 1 || budget > subset_count())
    throw InputError("budget p must satisfy 1 <= p <= k (k=" + std::to_string(subset_count()) +
                     ", p=" + std::to_string(budget) + ")");
  for (const auto& subset : subsets)
    for (int e : subset)
      if (e < 1 || e > universe_size)
        throw InputError("subset element " + std::to_string(e) + " outside universe 1.." +
                         std::to_string(universe_size));
}

SetCoverInstance parse_set_cover(std::istream& in, const std::string& source) {
  SetCoverInstance inst;
  std::vector<std::pair<int, std::vector<int>>> raw_subsets;
  bool saw_universe = false, saw_budget = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::string keyword;
    if (!(fields >> keyword)) continue;
    auto fail = [&](const std::string& message) -> void {
      throw InputError(source + ":" + std::to_string(line_no) + ": " + message);
    };
    if (keyword == "universe") {
      if (!(fields >> inst.universe_size)) fail("expected 'universe <n>'");
      saw_universe = true;
    } else if (keyword == "subset") {
      int id = 0;
      if (!(fields >> id)) fail("expected 'subset <id> <elements...>'");
      std::vector<int> members;
      int e;
      while (fields >> e) members.push_back(e);
      std::sort(members.begin(), members.end());
      members.erase(std::unique(members.begin(), members.end()), members.end());
      raw_subsets.emplace_back(id, std::move(members));
    } else if (keyword == "budget") {
      if (!(fields >> inst.budget)) fail("expected 'budget <p>'");
      saw_budget = true;
    } else if (keyword == "sensor_a") {
      std::string token;
      if (!(fields >> token)) fail("expected 'sensor_a <a>'");
      inst.sensor_a = Rational::parse(token);
    } else {
      fail("unknown keyword '" + keyword + "'");
    }
  }
  if (!saw_universe) throw InputError(source + ": missing 'universe' line");
  if (!saw_budget) throw InputError(source + ": missing 'budget' line");
  if (raw_subsets.empty()) throw InputError(source + ": no 'subset' lines");
  const int k = static_cast<int>(raw_subsets.size());
  inst.subsets.assign(k, {});
  std::vector<char> seen(k, 0);
  for (auto& [id, members] : raw_subsets) {
    if (id < 1 || id > k || seen[id - 1])
      throw InputError(source + ": subset ids must be 1..k without repeats (got " +
                       std::to_string(id) + ")");
    seen[id - 1] = 1;
    inst.subsets[id - 1] = std::move(members);
  }
  inst.validate();
  return inst;
}

SetCoverInstance load_set_cover(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open set-cover file '" + path + "'");
  return parse_set_cover(in, path);
}

EnergyParams gadget_params() {
  EnergyParams p;
  p.rx_energy_mj = 0.0;
  p.data_unit_bytes = 1;
  p.packet_capacity_bytes = 1;  // l = beta: one data unit per packet
  p.avg_tx_energy_mj = 1.0;
  return p;
}

GadgetGraph build_gadget(const SetCoverInstance& instance) {
  instance.validate();
  const int k = instance.subset_count();
  const int n = instance.universe_size;
  const int p = instance.budget;
  const double a = instance.sensor_a.to_double();
  const int sensors = 2 + 2 * k + n;

  std::vector<long long> base(sensors + 1, 0);
  base[1] = 2LL * k - p + 1;  // relay gate
  base[2] = static_cast<long long>(n) + p + 1;
  for (int i = 0; i < k; ++i) base[3 + i] = 2;
  for (int i = 0; i < k; ++i) base[3 + k + i] = static_cast<long long>(instance.subsets[i].size()) + 1;
  for (int j = 0; j < n; ++j) base[3 + 2 * k + j] = 1;

  std::vector<double> batteries(sensors + 1, 0.0);
  std::vector<double> sensor_energy(sensors + 1, 0.0);
  batteries[kSink] = kInfiniteEnergy;
  for (NodeId u = 1; u <= sensors; ++u) {
    batteries[u] = static_cast<double>(base[u]) + a;
    sensor_energy[u] = a;
  }

  std::vector<GraphEdge> edges;
  edges.push_back({0, 1, 1.0});
  edges.push_back({0, 2, 1.0});
  for (int i = 0; i < k; ++i) {
    edges.push_back({1, static_cast<NodeId>(3 + i), 1.0});
    edges.push_back({static_cast<NodeId>(3 + i), static_cast<NodeId>(3 + k + i), 1.0});
    edges.push_back({2, static_cast<NodeId>(3 + k + i), 1.0});
  }
  for (int i = 0; i < k; ++i)
    for (int e : instance.subsets[i])
      edges.push_back({static_cast<NodeId>(3 + k + i), static_cast<NodeId>(3 + 2 * k + e - 1), 1.0});

  std::vector<GadgetRow> row(sensors + 1, GadgetRow::root);
  row[1] = GadgetRow::relay_gate;
  row[2] = GadgetRow::cover_gate;
  for (int i = 0; i < k; ++i) row[3 + i] = GadgetRow::relay;
  for (int i = 0; i < k; ++i) row[3 + k + i] = GadgetRow::subset;
  for (int j = 0; j < n; ++j) row[3 + 2 * k + j] = GadgetRow::element;

  auto graph = ConnectivityGraph::allow_disconnected(sensors, std::move(batteries),
                                                     std::move(sensor_energy), std::move(edges));
  return GadgetGraph{std::move(graph), instance, std::move(row), std::move(base)};
}

namespace {

bool mask_covers(const SetCoverInstance& inst, std::uint32_t mask,
                 const std::vector<std::uint64_t>& subset_bits, std::uint64_t universe_bits) {
  std::uint64_t covered = 0;
  for (int i = 0; i < inst.subset_count(); ++i)
    if (mask & (1u << i)) covered |= subset_bits[i];
  return covered == universe_bits;
}

std::vector<std::uint64_t> subset_bitmasks(const SetCoverInstance& inst) {
  std::vector<std::uint64_t> bits(inst.subset_count(), 0);
  for (int i = 0; i < inst.subset_count(); ++i)
    for (int e : inst.subsets[i]) bits[i] |= 1ull << (e - 1);
  return bits;
}

}  // namespace

std::optional<std::vector<int>> find_set_cover(const SetCoverInstance& instance) {
  instance.validate();
  const int k = instance.subset_count();
  if (k > 20) throw GuardError("set-cover brute force limited to k <= 20 subsets");
  if (instance.universe_size > 63)
    throw GuardError("set-cover brute force limited to 63 elements");
  const auto bits = subset_bitmasks(instance);
  const std::uint64_t universe = instance.universe_size == 63
                                     ? ~0ull >> 1
                                     : (1ull << instance.universe_size) - 1;
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
    if (std::popcount(mask) > instance.budget) continue;
    if (mask_covers(instance, mask, bits, universe)) {
      std::vector<int> chosen;
      for (int i = 0; i < k; ++i)
        if (mask & (1u << i)) chosen.push_back(i);
      return chosen;
    }
  }
  return std::nullopt;
}

bool set_cover_bruteforce(const SetCoverInstance& instance) {
  return find_set_cover(instance).has_value();
}

bool has_lifetime_one_tree(const GadgetGraph& gadget, const LifetimeOneOptions& options) {
  if (gadget.graph.sensor_count() > options.max_sensor_nodes)
    throw GuardError("gadget too large for exact search: " +
                     std::to_string(gadget.graph.sensor_count()) +
                     " sensor nodes exceeds the limit of " +
                     std::to_string(options.max_sensor_nodes));
  if (!gadget.graph.connected()) return false;  // no spanning tree exists

  const auto& base = gadget.base_energy;
  const int nodes = gadget.graph.node_count();
  auto tree_ok = [&](const SpanningTreeView& view) {
    for (NodeId u = 1; u < nodes; ++u)
      if (base[u] < static_cast<long long>(view.desc[u]) + 1) return false;
    return true;
  };

  SpanningTreeEnumerator enumerator(gadget.graph);
  if (options.exec == Execution::parallel) {
#ifdef _OPENMP
    const auto chunks = enumerator.split(static_cast<std::size_t>(omp_get_max_threads()) * 8);
    std::atomic<bool> found{false};
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(chunks.size()); ++i) {
      if (found.load(std::memory_order_relaxed)) continue;
      enumerator.enumerate(chunks[i], [&](const SpanningTreeView& view) {
        if (tree_ok(view)) {
          found.store(true, std::memory_order_relaxed);
          return false;
        }
        return !found.load(std::memory_order_relaxed);
      });
    }
    return found.load();
#endif
  }
  bool found = false;
  enumerator.enumerate([&](const SpanningTreeView& view) {
    if (tree_ok(view)) {
      found = true;
      return false;
    }
    return true;
  });
  return found;
}

std::optional<CollectionTree> witness_tree(const GadgetGraph& gadget) {
  const auto cover = find_set_cover(gadget.instance);
  if (!cover) return std::nullopt;
  const auto& inst = gadget.instance;
  const int k = inst.subset_count();

  // Pad the cover to exactly p subsets; the gate energies are tuned for a
  // tree in which exactly p subset nodes hang off the cover gate.
  std::vector<char> chosen(k, 0);
  int chosen_count = 0;
  for (int i : *cover) {
    chosen[i] = 1;
    ++chosen_count;
  }
  for (int i = 0; i < k && chosen_count < inst.budget; ++i) {
    if (!chosen[i]) {
      chosen[i] = 1;
      ++chosen_count;
    }
  }

  std::vector<NodeId> parent(gadget.graph.node_count(), kSink);
  parent[gadget.relay_gate()] = kSink;
  parent[gadget.cover_gate()] = kSink;
  for (int i = 0; i < k; ++i) {
    parent[gadget.relay_node(i)] = gadget.relay_gate();
    parent[gadget.subset_node(i)] =
        chosen[i] ? gadget.cover_gate() : gadget.relay_node(i);
  }
  for (int j = 1; j <= inst.universe_size; ++j) {
    NodeId home = -1;
    for (int i = 0; i < k && home == -1; ++i)
      if (chosen[i] &&
          std::find(inst.subsets[i].begin(), inst.subsets[i].end(), j) != inst.subsets[i].end())
        home = gadget.subset_node(i);
    if (home == -1) return std::nullopt;  // cover found yet element uncovered: unreachable
    parent[gadget.element_node(j - 1)] = home;
  }
  return CollectionTree(gadget.graph, std::move(parent));
}

bool gadget_lifetime_at_least_one(const GadgetGraph& gadget, const CollectionTree& tree) {
  for (NodeId u = 1; u < gadget.graph.node_count(); ++u)
    if (gadget.base_energy[u] < static_cast<long long>(tree.descendant_count(u)) + 1) return false;
  return true;
}

bool gadget_node_lifetime_exactly_one(const GadgetGraph& gadget, const CollectionTree& tree,
                                      NodeId u) {
  return gadget.base_energy[u] == static_cast<long long>(tree.descendant_count(u)) + 1;
}

bool gadget_lifetime_exactly_one(const GadgetGraph& gadget, const CollectionTree& tree) {
  if (!gadget_lifetime_at_least_one(gadget, tree)) return false;
  for (NodeId u = 1; u < gadget.graph.node_count(); ++u)
    if (gadget_node_lifetime_exactly_one(gadget, tree, u)) return true;
  return false;
}

}  // namespace ccast
