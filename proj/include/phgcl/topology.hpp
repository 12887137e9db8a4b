#pragma once

#include "phgcl/centrality.hpp"
#include "phgcl/graph.hpp"

#include <utility>
#include <vector>

namespace phgcl {

// One cell of the filtration: nodes are dim 0 (id = node index), edges are
// dim 1 (id = index into g.edges).
struct Simplex {
    double value;
    int dim;
    int id;

    friend bool operator==(const Simplex&, const Simplex&) = default;
};

struct PersistenceDiagram {
    std::vector<std::pair<double, double>> pairs;  // finite (birth, death), death >= birth
    std::vector<double> essential_births;          // classes alive at the end of the sweep
    int dimension = 0;
};

struct TopoVector {
    static constexpr int kDefaultK = 32;

    // Layout: [0, k) top persistences sorted descending (zero padded),
    // then total persistence, finite pair count, cycle rank. Length k+3.
    std::vector<double> values;
    int k = kDefaultK;
};

// Nodes enter at f(v), edges at max of their endpoint values; the stream is
// sorted by (value, dim, id) so ties resolve the same way every run.
std::vector<Simplex> lower_star_filtration(const Graph& g, const std::vector<double>& f);

// Union-find sweep over the stream. An edge joining two components kills
// the younger one, i.e. the one whose creating node is later in the
// filtration order (larger birth, then larger node id), and emits
// (younger birth, edge value). Zero-persistence pairs are kept. Components
// alive at the end are reported through essential_births.
PersistenceDiagram persistence_h0(const Graph& g, const std::vector<Simplex>& stream);

// Number of independent cycles: |E| - |V| + #components.
int cycle_rank(const Graph& g);

// Fixed-length descriptor of the view's shape: filters by f = PageRank,
// finitizes essential classes at the maximum filtration value, and packs
// the sorted persistences plus summary statistics. Essential classes count
// toward the persistence entries and the total but not the finite-pair
// count.
TopoVector topo_descriptor(const Graph& g, const CentralityScores& phi,
                           int k = TopoVector::kDefaultK);

// Same vectorization applied to an arbitrary filtration function.
TopoVector vectorize(const Graph& g, const std::vector<double>& f, int k);

}  // namespace phgcl
