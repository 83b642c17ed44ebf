#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ccast/algorithms.hpp"
#include "ccast/model.hpp"

namespace ccast {

// Exact non-negative rational, just enough to carry the gadget's uniform
// sensor energy `a` without rounding. Parses plain decimals ("1", "0.25").
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d);
  static Rational parse(const std::string& text);

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Rational&) const = default;
};

struct SetCoverInstance {
  int universe_size = 0;                  // n, elements are 1..n
  std::vector<std::vector<int>> subsets;  // B_1..B_k
  int budget = 0;                         // p
  Rational sensor_a;                      // a >= 0

  int subset_count() const { return static_cast<int>(subsets.size()); }
  void validate() const;  // throws InputError
};

// Instance text format: `universe <n>`, `subset <id> <e1> <e2> ...`,
// `budget <p>`, `sensor_a <a>`; '#' comments.
SetCoverInstance parse_set_cover(std::istream& in, const std::string& source_name = "<input>");
SetCoverInstance load_set_cover(const std::string& path);

enum class GadgetRow : std::uint8_t { root, relay_gate, cover_gate, relay, subset, element };

// The five-row lifetime instance produced by the set-cover reduction.
// Batteries are base + a with integer base, so lifetime-one questions reduce
// to exact integer comparisons (a cancels on both sides of L_u >= 1).
struct GadgetGraph {
  ConnectivityGraph graph;
  SetCoverInstance instance;
  std::vector<GadgetRow> row;          // by node id
  std::vector<long long> base_energy;  // by node id; 0 for the root

  NodeId relay_gate() const { return 1; }  // energy 2k - p + 1 + a
  NodeId cover_gate() const { return 2; }  // energy n + p + 1 + a
  NodeId relay_node(int i) const { return 3 + i; }
  NodeId subset_node(int i) const { return 3 + instance.subset_count() + i; }
  NodeId element_node(int j) const { return 3 + 2 * instance.subset_count() + j; }
};

// Special-case parameters of the reduction: e_r = 0, l = beta, unit costs.
EnergyParams gadget_params();

// Builds the reduction graph. The result is disconnected exactly when some
// element lies in no subset; such gadgets have no spanning tree at all.
GadgetGraph build_gadget(const SetCoverInstance& instance);

// Exact decision over 2^k subset collections; guards k <= 20.
bool set_cover_bruteforce(const SetCoverInstance& instance);
// First covering collection of size <= p in mask order, if any.
std::optional<std::vector<int>> find_set_cover(const SetCoverInstance& instance);

struct LifetimeOneOptions {
  int max_sensor_nodes = 16;
  Execution exec = Execution::parallel;
};

// True iff some spanning tree of the gadget has lifetime >= 1; exact
// (integer arithmetic), by exhaustive enumeration. Throws GuardError above
// the size limit.
bool has_lifetime_one_tree(const GadgetGraph& gadget, const LifetimeOneOptions& options = {});

// The explicit lifetime-one tree built from a p set cover, when one exists.
std::optional<CollectionTree> witness_tree(const GadgetGraph& gadget);

// Exact per-tree checks: L_u >= 1 iff base_u >= D_u + 1.
bool gadget_lifetime_at_least_one(const GadgetGraph& gadget, const CollectionTree& tree);
bool gadget_lifetime_exactly_one(const GadgetGraph& gadget, const CollectionTree& tree);
bool gadget_node_lifetime_exactly_one(const GadgetGraph& gadget, const CollectionTree& tree,
                                      NodeId u);

}  // namespace ccast
