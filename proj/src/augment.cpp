#include "phgcl/augment.hpp"

#include "phgcl/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace phgcl {

namespace {
constexpr std::uint64_t kEdgeStream = 0xE0;
constexpr std::uint64_t kFeatureStream = 0xF0;
}

void AugmentConfig::validate() const {
    if (p_e < 0.0 || p_f < 0.0 || p_tau > 1.0 || p_e > p_tau || p_f > p_tau) {
        throw std::invalid_argument("augment: need 0 <= p_e, p_f <= p_tau <= 1");
    }
}

std::vector<double> edge_centrality(const Graph& g, const CentralityScores& phi) {
    if (static_cast<int>(phi.scores.size()) != g.n_nodes) {
        throw std::invalid_argument("edge_centrality: centrality scores do not match graph");
    }
    std::vector<double> w;
    w.reserve(g.edges.size());
    for (const Edge& e : g.edges) {
        w.push_back(0.5 * (phi.scores[e.u] + phi.scores[e.v]));
    }
    return w;
}

std::vector<double> removal_probs(const std::vector<double>& s, double p_base, double p_tau) {
    if (s.empty()) return {};
    double s_max = s[0], s_sum = 0.0;
    for (double v : s) {
        s_max = std::max(s_max, v);
        s_sum += v;
    }
    const double s_mean = s_sum / static_cast<double>(s.size());
    const double spread = s_max - s_mean;

    std::vector<double> p(s.size());
    if (spread <= 1e-12) {
        std::fill(p.begin(), p.end(), std::min(p_base, p_tau));
        return p;
    }
    for (std::size_t i = 0; i < s.size(); ++i) {
        p[i] = std::min((s_max - s[i]) / spread * p_base, p_tau);
    }
    return p;
}

std::vector<double> edge_removal_probs(const std::vector<double>& weights, double p_e,
                                       double p_tau) {
    std::vector<double> s;
    s.reserve(weights.size());
    for (double w : weights) {
        if (!(w > 0.0)) {
            throw std::invalid_argument("edge_removal_probs: edge weights must be positive");
        }
        s.push_back(std::log(w));
    }
    return removal_probs(s, p_e, p_tau);
}

std::vector<double> feature_weights(const Graph& g, const CentralityScores& phi) {
    if (static_cast<int>(phi.scores.size()) != g.n_nodes) {
        throw std::invalid_argument("feature_weights: centrality scores do not match graph");
    }
    std::vector<double> w(static_cast<std::size_t>(g.feature_dim()), 0.0);
    for (int u = 0; u < g.n_nodes; ++u) {
        for (int i = 0; i < g.feature_dim(); ++i) {
            w[i] += std::abs(g.features.at(u, i)) * phi.scores[u];
        }
    }
    return w;
}

std::vector<double> feature_removal_probs(const std::vector<double>& weights, double p_f,
                                          double p_tau) {
    std::vector<double> s(weights.size());
    double min_pos = std::numeric_limits<double>::infinity();
    bool any_pos = false;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] > 0.0) {
            s[i] = std::log(weights[i]);
            min_pos = std::min(min_pos, s[i]);
            any_pos = true;
        }
    }
    if (!any_pos) {
        // Every dimension weightless: nothing to rank, fall back to the base rate.
        return std::vector<double>(weights.size(), std::min(p_f, p_tau));
    }
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (!(weights[i] > 0.0)) s[i] = min_pos - 1.0;
    }
    return removal_probs(s, p_f, p_tau);
}

Graph perturb_edges(const Graph& g, const std::vector<double>& probs, std::uint64_t seed) {
    if (probs.size() != g.edges.size()) {
        throw std::invalid_argument("perturb_edges: one probability per edge required");
    }
    RngStream rng(seed);
    Graph out;
    out.n_nodes = g.n_nodes;
    out.features = g.features;
    out.label = g.label;
    out.edges.reserve(g.edges.size());
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
        if (!rng.bernoulli(probs[k])) out.edges.push_back(g.edges[k]);
    }
    return out;
}

Graph mask_features(const Graph& g, const std::vector<double>& probs, std::uint64_t seed,
                    std::vector<int>* mask_out) {
    if (static_cast<int>(probs.size()) != g.feature_dim()) {
        throw std::invalid_argument("mask_features: one probability per feature dimension");
    }
    RngStream rng(seed);
    std::vector<int> m(probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i) {
        m[i] = rng.bernoulli(probs[i]) ? 0 : 1;
    }
    Graph out = g;
    for (int u = 0; u < out.n_nodes; ++u) {
        for (int i = 0; i < out.feature_dim(); ++i) {
            if (m[i] == 0) out.features.at(u, i) = 0.0;
        }
    }
    if (mask_out) *mask_out = std::move(m);
    return out;
}

AugmentedPair make_views(const Graph& g, const CentralityScores& phi, const AugmentConfig& cfg,
                         std::uint64_t seed) {
    cfg.validate();
    AugmentedPair pair;
    pair.edge_probs = edge_removal_probs(edge_centrality(g, phi), cfg.p_e, cfg.p_tau);
    pair.feat_probs = feature_removal_probs(feature_weights(g, phi), cfg.p_f, cfg.p_tau);
    pair.view_e = perturb_edges(g, pair.edge_probs, derive_seed(seed, {kEdgeStream}));
    pair.view_f =
        mask_features(g, pair.feat_probs, derive_seed(seed, {kFeatureStream}), &pair.mask);
    return pair;
}

}  // namespace phgcl
