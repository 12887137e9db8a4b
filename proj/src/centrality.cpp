#include "phgcl/centrality.hpp"

#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

namespace phgcl {

CentralityScores pagerank(const Graph& g, double damping, double tol, int max_iter) {
    if (g.n_nodes < 1) {
        throw std::invalid_argument("pagerank: graph must have at least one node");
    }
    if (!(damping > 0.0) || !(damping < 1.0)) {
        throw std::invalid_argument("pagerank: damping must lie in (0, 1)");
    }
    const int n = g.n_nodes;
    const auto adj = g.adjacency();

    CentralityScores cs;
    cs.damping = damping;
    cs.scores.assign(static_cast<std::size_t>(n), 1.0 / n);

    std::vector<double> next(static_cast<std::size_t>(n));
    const double teleport = (1.0 - damping) / n;
    for (int it = 0; it < max_iter; ++it) {
        double dangling = 0.0;
        for (int v = 0; v < n; ++v) {
            if (adj[v].empty()) dangling += cs.scores[v];
        }
        const double spread = damping * dangling / n;
        for (int v = 0; v < n; ++v) next[v] = teleport + spread;
        for (int u = 0; u < n; ++u) {
            if (adj[u].empty()) continue;
            const double share = damping * cs.scores[u] / static_cast<double>(adj[u].size());
            for (int v : adj[u]) next[v] += share;
        }
        double residual = 0.0;
        for (int v = 0; v < n; ++v) residual += std::abs(next[v] - cs.scores[v]);
        cs.scores.swap(next);
        cs.iterations = it + 1;
        cs.residual = residual;
        if (residual < tol) {
            cs.converged = true;
            break;
        }
    }
    return cs;
}

DistanceMatrix shortest_paths(const Graph& g) {
    const int n = g.n_nodes;
    const auto adj = g.adjacency();

    DistanceMatrix dm;
    dm.psi = Matrix(n, n);
    for (int s = 0; s < n; ++s) {
        for (int t = 0; t < n; ++t) dm.psi.at(s, t) = DistanceMatrix::kUnreachable;
        dm.psi.at(s, s) = 0.0;
        std::queue<int> frontier;
        frontier.push(s);
        while (!frontier.empty()) {
            const int u = frontier.front();
            frontier.pop();
            const double du = dm.psi.at(s, u);
            for (int v : adj[u]) {
                if (dm.psi.at(s, v) < 0.0) {
                    dm.psi.at(s, v) = du + 1.0;
                    frontier.push(v);
                }
            }
        }
    }

    double sum = 0.0, sum_sq = 0.0;
    long count = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const double d = dm.psi.at(i, j);
            if (d < 0.0) continue;
            sum += d;
            sum_sq += d * d;
            ++count;
        }
    }
    if (count > 0) {
        dm.mean = sum / static_cast<double>(count);
        const double var = sum_sq / static_cast<double>(count) - dm.mean * dm.mean;
        dm.stddev = var > 0.0 ? std::sqrt(var) : 0.0;
    }
    return dm;
}

}  // namespace phgcl
