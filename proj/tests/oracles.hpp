#pragma once

// Reference implementations used only by the tests. Each one recomputes a
// result through a different algorithm than the library so agreement is
// meaningful: dense power iteration vs sparse accumulation, Floyd-Warshall
// vs BFS, boundary-matrix reduction vs union-find, plain double loops vs
// tape ops.

#include "phgcl/centrality.hpp"
#include "phgcl/graph.hpp"
#include "phgcl/matrix.hpp"
#include "phgcl/model.hpp"
#include "phgcl/rng.hpp"
#include "phgcl/topology.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

inline std::vector<double> pagerank_dense(const phgcl::Graph& g, double damping = 0.85,
                                          double tol = 1e-10, int max_iter = 200) {
    const int n = g.n_nodes;
    const auto adj = g.adjacency();
    // column u of the transition matrix: uniform over neighbours, or uniform
    // over all nodes when u has none.
    std::vector<std::vector<double>> m(static_cast<std::size_t>(n),
                                       std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int u = 0; u < n; ++u) {
        if (adj[static_cast<std::size_t>(u)].empty()) {
            for (int v = 0; v < n; ++v) m[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] = 1.0 / n;
        } else {
            const double share = 1.0 / static_cast<double>(adj[static_cast<std::size_t>(u)].size());
            for (int v : adj[static_cast<std::size_t>(u)])
                m[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] = share;
        }
    }
    std::vector<double> x(static_cast<std::size_t>(n), 1.0 / n);
    std::vector<double> next(static_cast<std::size_t>(n));
    for (int it = 0; it < max_iter; ++it) {
        for (int v = 0; v < n; ++v) {
            double acc = 0.0;
            for (int u = 0; u < n; ++u)
                acc += m[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] *
                       x[static_cast<std::size_t>(u)];
            next[static_cast<std::size_t>(v)] = (1.0 - damping) / n + damping * acc;
        }
        double residual = 0.0;
        for (int v = 0; v < n; ++v)
            residual += std::abs(next[static_cast<std::size_t>(v)] - x[static_cast<std::size_t>(v)]);
        x.swap(next);
        if (residual < tol) break;
    }
    return x;
}

inline phgcl::Matrix floyd_warshall(const phgcl::Graph& g) {
    const int n = g.n_nodes;
    const double inf = 1e18;
    phgcl::Matrix d(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) d.at(i, j) = i == j ? 0.0 : inf;
    for (const phgcl::Edge& e : g.edges) {
        d.at(e.u, e.v) = 1.0;
        d.at(e.v, e.u) = 1.0;
    }
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                d.at(i, j) = std::min(d.at(i, j), d.at(i, k) + d.at(k, j));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (d.at(i, j) >= inf) d.at(i, j) = phgcl::DistanceMatrix::kUnreachable;
    return d;
}

// Z/2 boundary-matrix reduction over the whole filtration. Columns are kept
// as sorted index lists; the standard left-to-right sweep pairs each
// negative edge with the node simplex at its pivot row.
inline phgcl::PersistenceDiagram persistence_reduction(const phgcl::Graph& g,
                                                       const std::vector<phgcl::Simplex>& stream) {
    const std::size_t m = stream.size();
    std::vector<int> node_pos(static_cast<std::size_t>(g.n_nodes), -1);
    for (std::size_t i = 0; i < m; ++i) {
        if (stream[i].dim == 0) node_pos[static_cast<std::size_t>(stream[i].id)] = static_cast<int>(i);
    }
    std::vector<std::vector<int>> cols(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (stream[i].dim != 1) continue;
        const phgcl::Edge& e = g.edges[static_cast<std::size_t>(stream[i].id)];
        int a = node_pos[static_cast<std::size_t>(e.u)];
        int b = node_pos[static_cast<std::size_t>(e.v)];
        cols[i] = {std::min(a, b), std::max(a, b)};
    }
    std::vector<int> owner(m, -1);  // pivot row -> column holding it
    phgcl::PersistenceDiagram dgm;
    for (std::size_t j = 0; j < m; ++j) {
        std::vector<int>& col = cols[j];
        while (!col.empty()) {
            int low = col.back();
            int k = owner[static_cast<std::size_t>(low)];
            if (k < 0) break;
            // symmetric difference with the column already owning this pivot
            std::vector<int> merged;
            std::set_symmetric_difference(col.begin(), col.end(),
                                          cols[static_cast<std::size_t>(k)].begin(),
                                          cols[static_cast<std::size_t>(k)].end(),
                                          std::back_inserter(merged));
            col.swap(merged);
        }
        if (!col.empty()) {
            int low = col.back();
            owner[static_cast<std::size_t>(low)] = static_cast<int>(j);
            dgm.pairs.emplace_back(stream[static_cast<std::size_t>(low)].value, stream[j].value);
        }
    }
    // unpaired node simplices carry the essential classes
    std::vector<bool> paired(m, false);
    for (std::size_t r = 0; r < m; ++r) {
        if (owner[r] >= 0) paired[r] = true;
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (stream[i].dim == 0 && !paired[i]) dgm.essential_births.push_back(stream[i].value);
    }
    std::sort(dgm.pairs.begin(), dgm.pairs.end());
    std::sort(dgm.essential_births.begin(), dgm.essential_births.end());
    return dgm;
}

inline phgcl::Matrix mat_product(const phgcl::Matrix& a, const phgcl::Matrix& b) {
    phgcl::Matrix out(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int k = 0; k < a.cols; ++k)
            for (int j = 0; j < b.cols; ++j) out.at(i, j) += a.at(i, k) * b.at(k, j);
    return out;
}

// Plain multi-head attention plus the block's feed-forward stage, written
// with loops and no masking. Matches gmha_branch when the Gaussian mask is
// all ones and every pair is included.
inline phgcl::Matrix reference_attention(const phgcl::Matrix& h, const phgcl::LayerParams& lp,
                                         int heads) {
    const int n = h.rows;
    const int dhead = lp.w_q[0].cols;
    const double scale = 1.0 / std::sqrt(static_cast<double>(dhead));
    phgcl::Matrix concat(n, dhead * heads);
    for (int hd = 0; hd < heads; ++hd) {
        const phgcl::Matrix q = mat_product(h, lp.w_q[static_cast<std::size_t>(hd)]);
        const phgcl::Matrix k = mat_product(h, lp.w_k[static_cast<std::size_t>(hd)]);
        phgcl::Matrix s(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double dot = 0.0;
                for (int c = 0; c < dhead; ++c) dot += q.at(i, c) * k.at(j, c);
                s.at(i, j) = dot * scale;
            }
        for (int i = 0; i < n; ++i) {
            double mx = s.at(i, 0);
            for (int j = 1; j < n; ++j) mx = std::max(mx, s.at(i, j));
            double denom = 0.0;
            for (int j = 0; j < n; ++j) denom += std::exp(s.at(i, j) - mx);
            for (int j = 0; j < n; ++j) s.at(i, j) = std::exp(s.at(i, j) - mx) / denom;
        }
        const phgcl::Matrix v = mat_product(mat_product(s, h), lp.w_v[static_cast<std::size_t>(hd)]);
        for (int i = 0; i < n; ++i)
            for (int c = 0; c < dhead; ++c) concat.at(i, hd * dhead + c) = v.at(i, c);
    }
    phgcl::Matrix hidden = mat_product(concat, lp.att_ffn.w_a);
    for (int i = 0; i < hidden.rows; ++i)
        for (int j = 0; j < hidden.cols; ++j) {
            hidden.at(i, j) += lp.att_ffn.b_a.at(0, j);
            if (hidden.at(i, j) < 0.0) hidden.at(i, j) = 0.0;
        }
    phgcl::Matrix out = mat_product(hidden, lp.att_ffn.w_b);
    for (int i = 0; i < out.rows; ++i)
        for (int j = 0; j < out.cols; ++j) out.at(i, j) += lp.att_ffn.b_b.at(0, j);
    return out;
}

// Central finite differences against analytic gradients. eval() must
// recompute the scalar objective from the current parameter contents.
// Returns the worst mixed absolute/relative gap.
template <typename Eval>
inline double max_grad_gap(const std::vector<phgcl::Matrix*>& params,
                           const std::vector<phgcl::Matrix>& grads, Eval eval, double h = 1e-5) {
    double worst = 0.0;
    for (std::size_t p = 0; p < params.size(); ++p) {
        for (std::size_t i = 0; i < params[p]->data.size(); ++i) {
            const double keep = params[p]->data[i];
            params[p]->data[i] = keep + h;
            const double up = eval();
            params[p]->data[i] = keep - h;
            const double down = eval();
            params[p]->data[i] = keep;
            const double fd = (up - down) / (2.0 * h);
            const double an = grads[p].data[i];
            const double gap =
                std::abs(an - fd) / std::max({1.0, std::abs(an), std::abs(fd)});
            worst = std::max(worst, gap);
        }
    }
    return worst;
}

// Erdos-Renyi style test graph; features (when requested) are small
// Gaussians so nothing saturates downstream.
inline phgcl::Graph random_graph(int n, double p_edge, phgcl::RngStream& rng, int d_f = 0) {
    phgcl::Graph g;
    g.n_nodes = n;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (rng.bernoulli(p_edge)) g.edges.push_back(phgcl::Edge{u, v, 1.0});
    if (d_f > 0) {
        g.features = phgcl::Matrix(n, d_f);
        for (double& x : g.features.data) x = 0.5 * rng.normal();
    } else {
        g.features = phgcl::Matrix(n, 1);
        for (double& x : g.features.data) x = 1.0;
    }
    return g;
}

}  // namespace oracle
