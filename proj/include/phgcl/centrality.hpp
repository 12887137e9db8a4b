#pragma once

#include "phgcl/graph.hpp"

#include <vector>

namespace phgcl {

struct CentralityScores {
    std::vector<double> scores;  // one per node, sums to 1
    double damping = 0.85;
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
};

// Hop-count shortest paths. Unreachable pairs hold kUnreachable.
struct DistanceMatrix {
    static constexpr double kUnreachable = -1.0;

    Matrix psi;          // [n x n], psi(i,i) = 0, symmetric
    double mean = 0.0;   // over ordered finite off-diagonal pairs
    double stddev = 0.0;

    bool reachable(int i, int j) const { return psi.at(i, j) >= 0.0; }
};

// Power iteration with uniform teleport (1-d)/n and uniform redistribution
// of rank held by isolated nodes. Stops when the L1 residual drops below
// tol or after max_iter sweeps; a run that exhausts max_iter is returned
// with converged=false and the final residual recorded.
CentralityScores pagerank(const Graph& g, double damping = 0.85, double tol = 1e-10,
                          int max_iter = 200);

// BFS from every node of the unweighted undirected graph.
DistanceMatrix shortest_paths(const Graph& g);

}  // namespace phgcl
