#pragma once

#include <iosfwd>
#include <string>

#include "phgcl/graph.hpp"

namespace phgcl {

/// Line-delimited dataset format: one graph record per line, each a JSON
/// object with fields `n_nodes`, `edges` (list of [u, v, w]), `features`
/// (n_nodes rows of d_F reals) and `label` (0/1 or null). UTF-8.
///
/// Metadata (name, generation seed) is an in-memory annotation and is not
/// written; round-trip identity holds on graphs and d_f.
std::string serialize_dataset(const Dataset& d);

// One graph as a single JSON record (no trailing newline).
std::string serialize_graph(const Graph& g);
Dataset parse_dataset(std::istream& in);

void save_dataset(const Dataset& d, const std::string& path);
Dataset load_dataset(const std::string& path);

}  // namespace phgcl
