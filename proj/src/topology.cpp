#include "phgcl/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace phgcl {

std::vector<Simplex> lower_star_filtration(const Graph& g, const std::vector<double>& f) {
    if (static_cast<int>(f.size()) != g.n_nodes) {
        throw std::invalid_argument("lower_star_filtration: one value per node required");
    }
    for (double v : f) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("lower_star_filtration: filtration values must be finite");
        }
    }
    std::vector<Simplex> stream;
    stream.reserve(f.size() + g.edges.size());
    for (int v = 0; v < g.n_nodes; ++v) {
        stream.push_back(Simplex{f[v], 0, v});
    }
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
        const Edge& e = g.edges[k];
        stream.push_back(Simplex{std::max(f[e.u], f[e.v]), 1, static_cast<int>(k)});
    }
    std::sort(stream.begin(), stream.end(), [](const Simplex& a, const Simplex& b) {
        return std::tie(a.value, a.dim, a.id) < std::tie(b.value, b.dim, b.id);
    });
    return stream;
}

namespace {

struct ComponentForest {
    std::vector<int> parent;
    std::vector<double> birth;    // of the component's surviving class
    std::vector<int> creator;     // node that created that class

    explicit ComponentForest(int n) : parent(n, -1), birth(n, 0.0), creator(n, -1) {}

    int find(int v) {
        int root = v;
        while (parent[root] != root) root = parent[root];
        while (parent[v] != root) {
            int next = parent[v];
            parent[v] = root;
            v = next;
        }
        return root;
    }
};

}  // namespace

PersistenceDiagram persistence_h0(const Graph& g, const std::vector<Simplex>& stream) {
    PersistenceDiagram dgm;
    ComponentForest forest(g.n_nodes);

    for (const Simplex& s : stream) {
        if (s.dim == 0) {
            forest.parent[s.id] = s.id;
            forest.birth[s.id] = s.value;
            forest.creator[s.id] = s.id;
            continue;
        }
        const Edge& e = g.edges[static_cast<std::size_t>(s.id)];
        int ru = forest.find(e.u);
        int rv = forest.find(e.v);
        if (ru == rv) continue;  // closes a cycle, no H0 event
        // The class whose creating node entered the filtration later dies.
        auto key = [&](int r) { return std::make_pair(forest.birth[r], forest.creator[r]); };
        int elder = ru, younger = rv;
        if (key(ru) > key(rv)) std::swap(elder, younger);
        dgm.pairs.emplace_back(forest.birth[younger], s.value);
        forest.parent[younger] = elder;
    }

    for (int v = 0; v < g.n_nodes; ++v) {
        if (forest.find(v) == v) dgm.essential_births.push_back(forest.birth[v]);
    }
    std::sort(dgm.pairs.begin(), dgm.pairs.end());
    std::sort(dgm.essential_births.begin(), dgm.essential_births.end());
    return dgm;
}

int cycle_rank(const Graph& g) {
    ComponentForest forest(g.n_nodes);
    for (int v = 0; v < g.n_nodes; ++v) forest.parent[v] = v;
    int components = g.n_nodes;
    for (const Edge& e : g.edges) {
        int ru = forest.find(e.u);
        int rv = forest.find(e.v);
        if (ru != rv) {
            forest.parent[ru] = rv;
            --components;
        }
    }
    return static_cast<int>(g.edges.size()) - g.n_nodes + components;
}

TopoVector vectorize(const Graph& g, const std::vector<double>& f, int k) {
    if (k < 0) throw std::invalid_argument("vectorize: k must be non-negative");
    TopoVector tv;
    tv.k = k;
    tv.values.assign(static_cast<std::size_t>(k) + 3, 0.0);
    if (g.n_nodes == 0) return tv;

    const auto stream = lower_star_filtration(g, f);
    const auto dgm = persistence_h0(g, stream);
    const double max_value = stream.back().value;

    std::vector<double> persistences;
    persistences.reserve(dgm.pairs.size() + dgm.essential_births.size());
    double total = 0.0;
    for (const auto& [b, d] : dgm.pairs) {
        persistences.push_back(d - b);
        total += d - b;
    }
    for (double b : dgm.essential_births) {
        persistences.push_back(max_value - b);
        total += max_value - b;
    }
    std::sort(persistences.begin(), persistences.end(), std::greater<>());

    for (int i = 0; i < k && i < static_cast<int>(persistences.size()); ++i) {
        tv.values[static_cast<std::size_t>(i)] = persistences[static_cast<std::size_t>(i)];
    }
    tv.values[static_cast<std::size_t>(k)] = total;
    tv.values[static_cast<std::size_t>(k) + 1] = static_cast<double>(dgm.pairs.size());
    tv.values[static_cast<std::size_t>(k) + 2] = static_cast<double>(cycle_rank(g));
    return tv;
}

TopoVector topo_descriptor(const Graph& g, const CentralityScores& phi, int k) {
    if (static_cast<int>(phi.scores.size()) != g.n_nodes) {
        throw std::invalid_argument("topo_descriptor: centrality scores do not match graph");
    }
    return vectorize(g, phi.scores, k);
}

}  // namespace phgcl
