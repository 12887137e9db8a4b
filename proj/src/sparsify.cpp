#include "phgcl/sparsify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace phgcl {

Graph sparsify(const Matrix& corr, double rho) {
    if (corr.rows != corr.cols) {
        throw std::invalid_argument("sparsify: correlation matrix must be square");
    }
    if (!(rho > 0.0) || rho > 1.0) {
        throw std::invalid_argument("sparsify: rho must lie in (0, 1]");
    }
    const int n = corr.rows;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (std::abs(corr.at(i, j) - corr.at(j, i)) > 1e-9) {
                throw std::invalid_argument("sparsify: correlation matrix must be symmetric");
            }
        }
    }

    struct Pair {
        double mag;
        int u, v;
    };
    std::vector<Pair> pairs;
    pairs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            pairs.push_back(Pair{std::abs(corr.at(u, v)), u, v});
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        return std::tie(b.mag, a.u, a.v) < std::tie(a.mag, b.u, b.v);
    });

    const double total = static_cast<double>(pairs.size());
    // Guard against e.g. 0.3 * 10 evaluating to 3.0000000000000004.
    auto m = static_cast<std::size_t>(std::ceil(rho * total - 1e-9));
    if (m > pairs.size()) m = pairs.size();

    Graph g;
    g.n_nodes = n;
    g.edges.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
        g.edges.push_back(Edge{pairs[k].u, pairs[k].v, 1.0});
    }
    std::sort(g.edges.begin(), g.edges.end());

    g.features = corr;
    g.validate();
    return g;
}

}  // namespace phgcl
