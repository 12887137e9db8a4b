#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "phgcl/matrix.hpp"

namespace phgcl {

/// Undirected edge in canonical orientation u < v.
struct Edge {
    int u = 0;
    int v = 0;
    double w = 1.0;
    auto operator<=>(const Edge&) const = default;
};

/// Attributed undirected simple graph: the unit of every dataset.
struct Graph {
    int n_nodes = 0;
    std::vector<Edge> edges;   ///< sorted by (u, v), u < v, no duplicates
    Matrix features;           ///< n_nodes x d_F
    std::optional<int> label;  ///< binary class when present

    int feature_dim() const { return features.cols; }

    /// Neighbor lists, both directions.
    std::vector<std::vector<int>> adjacency() const;
    std::vector<int> degrees() const;

    /// Enforces the structural invariants; throws std::invalid_argument.
    void validate() const;

    bool operator==(const Graph&) const = default;
};

/// In-memory annotations (provenance of a generated dataset). Not persisted
/// by the line-delimited file format and excluded from equality.
struct DatasetMeta {
    std::string name;
    std::uint64_t seed = 0;
};

struct Dataset {
    std::vector<Graph> graphs;
    int d_f = 0;
    DatasetMeta meta;

    void validate() const;

    bool operator==(const Dataset& o) const {
        return graphs == o.graphs && d_f == o.d_f;
    }
};

}  // namespace phgcl
