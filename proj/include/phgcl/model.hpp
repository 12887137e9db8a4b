#pragma once

#include "phgcl/centrality.hpp"
#include "phgcl/graph.hpp"
#include "phgcl/tape.hpp"
#include "phgcl/topology.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace phgcl {

struct ModelConfig {
    int d_f = 0;       // input feature width
    int d_h = 16;      // hidden width
    int heads = 4;     // attention heads, must divide d_h
    int layers = 2;    // encoder depth L
    bool use_ddformer = true;        // false: GCN branch only, no fusion
    bool attention_readout = false;  // default readout is mean pooling

    void validate() const;
};

struct FfnParams {
    Matrix w_a, b_a;  // expand to 2x width
    Matrix w_b, b_b;  // project back
};

struct LayerParams {
    Matrix w1;        // GCN weight [d_h x d_h]
    FfnParams gcn_ffn;
    std::vector<Matrix> w_q, w_k, w_v;  // per head, [d_h x d_h/heads]
    FfnParams att_ffn;
    Matrix gate_w, gate_b;  // fusion gate [d_h x d_h], [1 x d_h]
};

struct ModelParams {
    ModelConfig cfg;
    Matrix w_in, b_in;         // input projection [d_f x d_h], [1 x d_h]
    Matrix ln_gamma, ln_beta;  // layer norm after projection [1 x d_h]
    std::vector<LayerParams> layers;
    Matrix w_att;        // attention readout weight [d_h x 1]
    Matrix cls_w, cls_b; // classifier head [d_h x 1], [1 x 1]

    // Xavier weights, zero biases, unit layer-norm scale. Deterministic.
    static ModelParams init(const ModelConfig& cfg, std::uint64_t seed);

    // Stable (name, tensor) listing used by the optimizer and checkpoints.
    std::vector<std::pair<std::string, Matrix*>> roster();
    std::vector<std::pair<std::string, const Matrix*>> roster() const;
};

// Tape handles for every parameter, mirroring ModelParams.
struct TapeParams {
    ModelConfig cfg;
    Var w_in, b_in, ln_gamma, ln_beta;
    struct Layer {
        Var w1, gcn_wa, gcn_ba, gcn_wb, gcn_bb;
        std::vector<Var> w_q, w_k, w_v;
        Var att_wa, att_ba, att_wb, att_bb;
        Var gate_w, gate_b;
    };
    std::vector<Layer> layers;
    Var w_att, cls_w, cls_b;
    std::vector<Var> roster_order;  // aligned with ModelParams::roster()
};

TapeParams register_params(Tape& t, const ModelParams& p, bool requires_grad);

// Dense D^{-1/2} (A + I) D^{-1/2} with self-loops added before the degrees.
Matrix normalized_adjacency(const Graph& g);

// Gaussian distance decay: M_ij = exp(-(psi_ij - mu)^2 / (2 sigma^2)) for
// reachable pairs, 1 everywhere when sigma < 1e-6. Unreachable entries are
// left at 1 and flagged through the inclusion matrix instead.
Matrix gaussian_mask(const DistanceMatrix& dist);

// 1 where psi is finite (self pairs always), 0 for unreachable pairs.
Matrix reachability_mask(const DistanceMatrix& dist);

struct GraphVars {
    Var node_matrix;  // H^(L), [n x d_h]
    Var embedding;    // h_G, [1 x d_h]
    Var scores;       // attention readout scores [n x 1]; valid iff has_scores
    bool has_scores = false;
};

Var ffn(Tape& t, Var h, Var w_a, Var b_a, Var w_b, Var b_b);
Var gcn_branch(Tape& t, Var h, Var norm_adj, const TapeParams::Layer& lp);
Var gmha_branch(Tape& t, Var h, const Matrix& mask, const Matrix& include,
                const TapeParams::Layer& lp, int heads);
Var fuse(Tape& t, Var h_gcn, Var h_gt, Var h_prev, const TapeParams::Layer& lp);

// Full encoder: projection + layer norm, then L blocks, then readout.
GraphVars encode_graph(Tape& t, const Graph& g, const TapeParams& pv);

struct LossConfig {
    double tau = 0.5;
    double lambda1 = 0.1;
    double lambda2 = 0.01;
    bool use_gcl = true;
    bool use_topo = true;
    // Averages the two directed forms instead of the single direction;
    // off by default and not part of the reference objective.
    bool symmetric_nce = false;

    void validate() const;
};

// Contrastive loss over per-graph embeddings ([1 x d] rows). Anchors the
// E-view to its F-view in the numerator; the denominator ranges over the
// other graphs' F-views only. Requires at least two graphs.
Var info_nce(Tape& t, const std::vector<Var>& z_e, const std::vector<Var>& z_f, double tau,
             bool symmetric = false);

// Same objective over constant topology descriptors; no gradient flows.
// Cosine similarity against an all-zero vector is 0 by convention.
double topo_nce(const std::vector<TopoVector>& to_e, const std::vector<TopoVector>& to_f,
                double tau, bool symmetric = false);

// Mean binary cross-entropy of sigmoid(classifier(embedding)) rows against
// labels; predictions are clamped to [1e-12, 1 - 1e-12] before the logs.
Var bce_loss(Tape& t, Var embeddings, const std::vector<int>& labels, const TapeParams& pv);

struct BatchGraphs {
    std::vector<const Graph*> originals;        // labeled
    std::vector<const Graph*> view_e;           // aligned; may be empty when contrast off
    std::vector<const Graph*> view_f;
    std::vector<const TopoVector*> topo_e;      // aligned with views; empty when topo off
    std::vector<const TopoVector*> topo_f;
};

struct LossParts {
    double total = 0.0;
    double ce = 0.0;
    double gcl = 0.0;
    double topo = 0.0;
};

// Joint objective: CE on the unaugmented embeddings plus lambda1 * feature
// contrast plus lambda2 * topology contrast, honoring the LossConfig
// toggles. Returns the scalar loss node; parts reports the summands.
Var total_loss(Tape& t, const TapeParams& pv, const BatchGraphs& batch, const LossConfig& lc,
               LossParts* parts = nullptr);

// Forward-only probability that g belongs to class 1.
double predict(const ModelParams& p, const Graph& g);

// Forward-only attention-readout scores (requires attention_readout).
std::vector<double> readout_scores(const ModelParams& p, const Graph& g);

}  // namespace phgcl
