#include "phgcl/graph.hpp"

#include <stdexcept>
#include <string>

namespace phgcl {

std::vector<std::vector<int>> Graph::adjacency() const {
    std::vector<std::vector<int>> adj(n_nodes);
    for (const Edge& e : edges) {
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    return adj;
}

std::vector<int> Graph::degrees() const {
    std::vector<int> deg(n_nodes, 0);
    for (const Edge& e : edges) {
        ++deg[e.u];
        ++deg[e.v];
    }
    return deg;
}

void Graph::validate() const {
    if (n_nodes < 0) throw std::invalid_argument("graph: negative node count");
    if (features.rows != n_nodes) {
        throw std::invalid_argument("graph: feature rows (" + std::to_string(features.rows) +
                                    ") do not match node count (" + std::to_string(n_nodes) + ")");
    }
    const Edge* prev = nullptr;
    for (const Edge& e : edges) {
        if (e.u < 0 || e.v < 0 || e.u >= n_nodes || e.v >= n_nodes) {
            throw std::invalid_argument("graph: edge endpoint out of range");
        }
        if (e.u == e.v) throw std::invalid_argument("graph: self-loop");
        if (e.u > e.v) throw std::invalid_argument("graph: edge not in canonical u < v order");
        if (prev && (prev->u > e.u || (prev->u == e.u && prev->v >= e.v))) {
            throw std::invalid_argument("graph: edges not sorted or duplicated");
        }
        prev = &e;
    }
    if (label && *label != 0 && *label != 1) {
        throw std::invalid_argument("graph: label must be 0 or 1");
    }
}

void Dataset::validate() const {
    std::size_t labeled = 0;
    for (std::size_t i = 0; i < graphs.size(); ++i) {
        graphs[i].validate();
        if (graphs[i].feature_dim() != d_f) {
            throw std::invalid_argument("dataset: graph " + std::to_string(i) +
                                        " feature dimension differs from d_f");
        }
        if (graphs[i].label) ++labeled;
    }
    if (labeled != 0 && labeled != graphs.size()) {
        throw std::invalid_argument("dataset: labels must be present for all graphs or none");
    }
}

}  // namespace phgcl
