#pragma once

#include <iosfwd>
#include <string>

#include "ccast/model.hpp"

namespace ccast {

// Line-oriented graph format:
//   nodes <n>                      sensor count, excluding the sink
//   node <id> <battery_mJ|inf> <k_mJ>
//   edge <u> <v> <cost_mJ>
// '#' starts a comment; node 0 must be the sink with battery "inf".
// Parse errors carry 1-based line numbers.
ConnectivityGraph parse_graph(std::istream& in, const std::string& source_name = "<input>");
ConnectivityGraph load_graph(const std::string& path);

void write_graph(std::ostream& out, const ConnectivityGraph& graph);

// Tree snapshot rows: parent_of,<u>,<v>,<depth> with v = parent of u.
void write_tree_csv(std::ostream& out, const CollectionTree& tree);
CollectionTree parse_tree_csv(std::istream& in, const ConnectivityGraph& graph);

}  // namespace ccast
