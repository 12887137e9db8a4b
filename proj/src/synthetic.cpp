#include "phgcl/synthetic.hpp"

#include "phgcl/rng.hpp"

#include <stdexcept>
#include <string>

namespace phgcl {

namespace {
constexpr std::uint64_t kSyntheticStream = 0xD5;
}

Dataset generate_synthetic(int n_graphs, int n_nodes, int d_f, double class_gap,
                           std::uint64_t seed) {
    if (n_graphs <= 0 || n_graphs % 2 != 0) {
        throw std::invalid_argument("generate_synthetic: n_graphs must be positive and even");
    }
    if (n_nodes < 1) {
        throw std::invalid_argument("generate_synthetic: n_nodes must be >= 1");
    }
    if (d_f < 2) {
        throw std::invalid_argument("generate_synthetic: d_f must be >= 2");
    }
    if (class_gap < 0.0 || 0.3 + class_gap > 1.0 || 0.3 - class_gap < 0.0) {
        throw std::invalid_argument(
            "generate_synthetic: class_gap must lie in [0, 0.3] so edge probabilities stay in "
            "[0,1]");
    }

    Dataset d;
    d.d_f = d_f;
    d.meta.name = "synthetic";
    d.meta.seed = seed;
    d.graphs.reserve(static_cast<std::size_t>(n_graphs));

    const int block_split = (n_nodes + 1) / 2;  // nodes [0, split) are block 0
    for (int i = 0; i < n_graphs; ++i) {
        RngStream rng(derive_seed(seed, {kSyntheticStream, static_cast<std::uint64_t>(i)}));
        const int label = i % 2;
        const double p_in = label == 0 ? 0.3 + class_gap : 0.3 - class_gap;
        const double p_out = 0.1;

        Graph g;
        g.n_nodes = n_nodes;
        g.label = label;
        for (int u = 0; u < n_nodes; ++u) {
            for (int v = u + 1; v < n_nodes; ++v) {
                const bool same_block = (u < block_split) == (v < block_split);
                if (rng.bernoulli(same_block ? p_in : p_out)) {
                    g.edges.push_back(Edge{u, v, 1.0});
                }
            }
        }

        g.features = Matrix(n_nodes, d_f);
        const double shift = label == 0 ? class_gap : -class_gap;
        for (int u = 0; u < n_nodes; ++u) {
            const int block = u < block_split ? 0 : 1;
            for (int k = 0; k < d_f; ++k) {
                double x = 0.1 * rng.normal();
                if (k == block) x += 1.0;
                if (k == 0) x += shift;
                g.features.at(u, k) = x;
            }
        }
        d.graphs.push_back(std::move(g));
    }

    d.validate();
    return d;
}

}  // namespace phgcl
