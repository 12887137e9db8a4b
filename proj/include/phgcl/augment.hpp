#pragma once

#include "phgcl/centrality.hpp"
#include "phgcl/graph.hpp"

#include <cstdint>
#include <vector>

namespace phgcl {

struct AugmentConfig {
    double p_e = 0.2;    // base edge-removal rate
    double p_f = 0.2;    // base feature-mask rate
    double p_tau = 0.2;  // truncation cap on every computed probability

    // Throws std::invalid_argument unless 0 <= p_e, p_f <= p_tau <= 1.
    void validate() const;
};

struct AugmentedPair {
    Graph view_e;                    // edges perturbed, features intact
    Graph view_f;                    // edges intact, features masked
    std::vector<double> edge_probs;  // removal probability per original edge
    std::vector<double> feat_probs;  // mask probability per feature dimension
    std::vector<int> mask;           // shared 0/1 column mask, length d_f
};

// Mean endpoint centrality per edge, aligned with g.edges.
std::vector<double> edge_centrality(const Graph& g, const CentralityScores& phi);

// Log-scales the weights and maps low-importance items to high removal
// probability: s = log w, p = min(((s_max - s)/(s_max - mean_s)) * p_base,
// p_tau). When every item is equally important (s_max == mean_s) the base
// rate applies uniformly. Used for both edges and feature dimensions.
std::vector<double> removal_probs(const std::vector<double>& s, double p_base, double p_tau);

// removal_probs on log-transformed weights; all weights must be > 0.
std::vector<double> edge_removal_probs(const std::vector<double>& weights, double p_e,
                                       double p_tau);

// Importance of each feature dimension: w_i = sum_u |x_ui| * phi(u).
std::vector<double> feature_weights(const Graph& g, const CentralityScores& phi);

// Log-scale for feature weights; dimensions with w_i = 0 get a sentinel
// score one below the smallest positive log weight so they rank least
// important. All-zero weights degenerate to a uniform base rate.
std::vector<double> feature_removal_probs(const std::vector<double>& weights, double p_f,
                                          double p_tau);

// Keeps each edge independently with probability 1 - probs[k].
Graph perturb_edges(const Graph& g, const std::vector<double>& probs, std::uint64_t seed);

// Draws one Bernoulli mask m_i ~ Bern(1 - probs[i]) and zeroes column i of
// the feature matrix wherever m_i = 0. If mask_out is non-null it receives m.
Graph mask_features(const Graph& g, const std::vector<double>& probs, std::uint64_t seed,
                    std::vector<int>* mask_out = nullptr);

// Builds the edge-perturbed view and the feature-masked view of g using the
// same centrality scores. The two views consume distinct sub-streams of
// seed, so they are independently reproducible.
AugmentedPair make_views(const Graph& g, const CentralityScores& phi, const AugmentConfig& cfg,
                         std::uint64_t seed);

}  // namespace phgcl
