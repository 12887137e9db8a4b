#include "phgcl/model.hpp"

#include "phgcl/rng.hpp"
#include "phgcl/tensor.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace phgcl {

void ModelConfig::validate() const {
    if (d_f < 1) throw std::invalid_argument("model: d_f must be >= 1");
    if (d_h < 1) throw std::invalid_argument("model: d_h must be >= 1");
    if (heads < 1 || d_h % heads != 0) {
        throw std::invalid_argument("model: heads must be >= 1 and divide d_h");
    }
    if (layers < 1) throw std::invalid_argument("model: layers must be >= 1");
}

void LossConfig::validate() const {
    if (!(tau > 0.0)) throw std::invalid_argument("loss: tau must be positive");
    if (!(lambda1 > 0.0) || lambda1 > 1.0 || !(lambda2 > 0.0) || lambda2 > 1.0) {
        throw std::invalid_argument("loss: lambda1 and lambda2 must lie in (0, 1]");
    }
}

ModelParams ModelParams::init(const ModelConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    ModelParams p;
    p.cfg = cfg;
    std::uint64_t idx = 0;
    auto xav = [&](int r, int c) { return xavier_init(r, c, derive_seed(seed, {idx++})); };
    auto ones = [](int c) {
        Matrix m(1, c);
        for (double& x : m.data) x = 1.0;
        return m;
    };
    const int dh = cfg.d_h;
    p.w_in = xav(cfg.d_f, dh);
    p.b_in = Matrix(1, dh);
    p.ln_gamma = ones(dh);
    p.ln_beta = Matrix(1, dh);
    const int dhead = dh / cfg.heads;
    for (int l = 0; l < cfg.layers; ++l) {
        LayerParams lp;
        lp.w1 = xav(dh, dh);
        lp.gcn_ffn = FfnParams{xav(dh, 2 * dh), Matrix(1, 2 * dh), xav(2 * dh, dh), Matrix(1, dh)};
        for (int h = 0; h < cfg.heads; ++h) lp.w_q.push_back(xav(dh, dhead));
        for (int h = 0; h < cfg.heads; ++h) lp.w_k.push_back(xav(dh, dhead));
        for (int h = 0; h < cfg.heads; ++h) lp.w_v.push_back(xav(dh, dhead));
        lp.att_ffn = FfnParams{xav(dh, 2 * dh), Matrix(1, 2 * dh), xav(2 * dh, dh), Matrix(1, dh)};
        lp.gate_w = xav(dh, dh);
        lp.gate_b = Matrix(1, dh);
        p.layers.push_back(std::move(lp));
    }
    p.w_att = xav(dh, 1);
    p.cls_w = xav(dh, 1);
    p.cls_b = Matrix(1, 1);
    return p;
}

namespace {

template <typename Params, typename Mat>
std::vector<std::pair<std::string, Mat*>> roster_impl(Params& p) {
    std::vector<std::pair<std::string, Mat*>> r;
    r.emplace_back("w_in", &p.w_in);
    r.emplace_back("b_in", &p.b_in);
    r.emplace_back("ln_gamma", &p.ln_gamma);
    r.emplace_back("ln_beta", &p.ln_beta);
    for (std::size_t l = 0; l < p.layers.size(); ++l) {
        auto& lp = p.layers[l];
        const std::string pre = "layer" + std::to_string(l) + ".";
        r.emplace_back(pre + "w1", &lp.w1);
        r.emplace_back(pre + "gcn_ffn.w_a", &lp.gcn_ffn.w_a);
        r.emplace_back(pre + "gcn_ffn.b_a", &lp.gcn_ffn.b_a);
        r.emplace_back(pre + "gcn_ffn.w_b", &lp.gcn_ffn.w_b);
        r.emplace_back(pre + "gcn_ffn.b_b", &lp.gcn_ffn.b_b);
        for (std::size_t h = 0; h < lp.w_q.size(); ++h) {
            r.emplace_back(pre + "w_q" + std::to_string(h), &lp.w_q[h]);
        }
        for (std::size_t h = 0; h < lp.w_k.size(); ++h) {
            r.emplace_back(pre + "w_k" + std::to_string(h), &lp.w_k[h]);
        }
        for (std::size_t h = 0; h < lp.w_v.size(); ++h) {
            r.emplace_back(pre + "w_v" + std::to_string(h), &lp.w_v[h]);
        }
        r.emplace_back(pre + "att_ffn.w_a", &lp.att_ffn.w_a);
        r.emplace_back(pre + "att_ffn.b_a", &lp.att_ffn.b_a);
        r.emplace_back(pre + "att_ffn.w_b", &lp.att_ffn.w_b);
        r.emplace_back(pre + "att_ffn.b_b", &lp.att_ffn.b_b);
        r.emplace_back(pre + "gate_w", &lp.gate_w);
        r.emplace_back(pre + "gate_b", &lp.gate_b);
    }
    r.emplace_back("w_att", &p.w_att);
    r.emplace_back("cls_w", &p.cls_w);
    r.emplace_back("cls_b", &p.cls_b);
    return r;
}

}  // namespace

std::vector<std::pair<std::string, Matrix*>> ModelParams::roster() {
    return roster_impl<ModelParams, Matrix>(*this);
}

std::vector<std::pair<std::string, const Matrix*>> ModelParams::roster() const {
    return roster_impl<const ModelParams, const Matrix>(*this);
}

TapeParams register_params(Tape& t, const ModelParams& p, bool requires_grad) {
    p.cfg.validate();
    TapeParams pv;
    pv.cfg = p.cfg;
    auto reg = [&](const Matrix& m) {
        Var v = t.input(m, requires_grad);
        pv.roster_order.push_back(v);
        return v;
    };
    pv.w_in = reg(p.w_in);
    pv.b_in = reg(p.b_in);
    pv.ln_gamma = reg(p.ln_gamma);
    pv.ln_beta = reg(p.ln_beta);
    for (const LayerParams& lp : p.layers) {
        TapeParams::Layer lv;
        lv.w1 = reg(lp.w1);
        lv.gcn_wa = reg(lp.gcn_ffn.w_a);
        lv.gcn_ba = reg(lp.gcn_ffn.b_a);
        lv.gcn_wb = reg(lp.gcn_ffn.w_b);
        lv.gcn_bb = reg(lp.gcn_ffn.b_b);
        for (const Matrix& m : lp.w_q) lv.w_q.push_back(reg(m));
        for (const Matrix& m : lp.w_k) lv.w_k.push_back(reg(m));
        for (const Matrix& m : lp.w_v) lv.w_v.push_back(reg(m));
        lv.att_wa = reg(lp.att_ffn.w_a);
        lv.att_ba = reg(lp.att_ffn.b_a);
        lv.att_wb = reg(lp.att_ffn.w_b);
        lv.att_bb = reg(lp.att_ffn.b_b);
        lv.gate_w = reg(lp.gate_w);
        lv.gate_b = reg(lp.gate_b);
        pv.layers.push_back(std::move(lv));
    }
    pv.w_att = reg(p.w_att);
    pv.cls_w = reg(p.cls_w);
    pv.cls_b = reg(p.cls_b);
    return pv;
}

Matrix normalized_adjacency(const Graph& g) {
    const int n = g.n_nodes;
    Matrix a(n, n);
    for (int i = 0; i < n; ++i) a.at(i, i) = 1.0;
    for (const Edge& e : g.edges) {
        a.at(e.u, e.v) += e.w;
        a.at(e.v, e.u) += e.w;
    }
    std::vector<double> dinv(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double deg = 0.0;
        for (int j = 0; j < n; ++j) deg += a.at(i, j);
        dinv[static_cast<std::size_t>(i)] = 1.0 / std::sqrt(deg);
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a.at(i, j) *= dinv[i] * dinv[j];
    }
    return a;
}

Matrix gaussian_mask(const DistanceMatrix& dist) {
    const int n = dist.psi.rows;
    Matrix m(n, n);
    const double sigma = dist.stddev;
    for (double& x : m.data) x = 1.0;
    if (sigma < 1e-6) return m;
    const double denom = 2.0 * sigma * sigma;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double psi = dist.psi.at(i, j);
            if (psi < 0.0) continue;  // unreachable, excluded downstream
            const double d = psi - dist.mean;
            m.at(i, j) = std::exp(-d * d / denom);
        }
    }
    return m;
}

Matrix reachability_mask(const DistanceMatrix& dist) {
    const int n = dist.psi.rows;
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) m.at(i, j) = dist.psi.at(i, j) >= 0.0 ? 1.0 : 0.0;
    }
    return m;
}

Var ffn(Tape& t, Var h, Var w_a, Var b_a, Var w_b, Var b_b) {
    Var hidden = t.relu(t.add_rowvec(t.matmul(h, w_a), b_a));
    return t.add_rowvec(t.matmul(hidden, w_b), b_b);
}

Var gcn_branch(Tape& t, Var h, Var norm_adj, const TapeParams::Layer& lp) {
    Var conv = t.relu(t.matmul(t.matmul(norm_adj, h), lp.w1));
    return ffn(t, conv, lp.gcn_wa, lp.gcn_ba, lp.gcn_wb, lp.gcn_bb);
}

Var gmha_branch(Tape& t, Var h, const Matrix& mask, const Matrix& include,
                const TapeParams::Layer& lp, int heads) {
    const int dhead = t.value(lp.w_q[0]).cols;
    const double scale = 1.0 / std::sqrt(static_cast<double>(dhead));
    std::vector<Var> outs;
    outs.reserve(static_cast<std::size_t>(heads));
    for (int hd = 0; hd < heads; ++hd) {
        Var q = t.matmul(h, lp.w_q[static_cast<std::size_t>(hd)]);
        Var k = t.matmul(h, lp.w_k[static_cast<std::size_t>(hd)]);
        Var s = t.scale(t.matmul(q, t.transpose(k)), scale);
        Var attn = t.masked_softmax_rows(s, mask, include);
        outs.push_back(t.matmul(t.matmul(attn, h), lp.w_v[static_cast<std::size_t>(hd)]));
    }
    Var concat = heads == 1 ? outs[0] : t.concat_cols(outs);
    return ffn(t, concat, lp.att_wa, lp.att_ba, lp.att_wb, lp.att_bb);
}

Var fuse(Tape& t, Var h_gcn, Var h_gt, Var h_prev, const TapeParams::Layer& lp) {
    Var alpha = t.sigmoid(t.add_rowvec(t.matmul(t.mean_rows(h_prev), lp.gate_w), lp.gate_b));
    Var one_minus = t.affine(alpha, -1.0, 1.0);
    return t.add(t.mul_rowvec(h_gcn, alpha), t.mul_rowvec(h_gt, one_minus));
}

GraphVars encode_graph(Tape& t, const Graph& g, const TapeParams& pv) {
    if (g.n_nodes < 1) throw std::invalid_argument("encode: graph must have at least one node");
    if (g.feature_dim() != pv.cfg.d_f) {
        throw std::invalid_argument("encode: feature width " + std::to_string(g.feature_dim()) +
                                    " does not match model d_f " + std::to_string(pv.cfg.d_f));
    }
    Var x = t.constant(g.features);
    Var h = t.layer_norm_rows(t.add_rowvec(t.matmul(x, pv.w_in), pv.b_in), pv.ln_gamma,
                              pv.ln_beta);
    Var adj = t.constant(normalized_adjacency(g));

    Matrix mask, include;
    if (pv.cfg.use_ddformer) {
        const DistanceMatrix dm = shortest_paths(g);
        mask = gaussian_mask(dm);
        include = reachability_mask(dm);
    }
    for (const TapeParams::Layer& lp : pv.layers) {
        Var h_gcn = gcn_branch(t, h, adj, lp);
        if (pv.cfg.use_ddformer) {
            Var h_gt = gmha_branch(t, h, mask, include, lp, pv.cfg.heads);
            h = fuse(t, h_gcn, h_gt, h, lp);
        } else {
            h = h_gcn;
        }
    }

    GraphVars out;
    out.node_matrix = h;
    if (pv.cfg.attention_readout) {
        Var logits = t.matmul(h, pv.w_att);                         // [n x 1]
        Var scores = t.transpose(t.softmax_rows(t.transpose(logits)));  // softmax over nodes
        out.scores = scores;
        out.has_scores = true;
        out.embedding = t.matmul(t.transpose(scores), h);
    } else {
        out.embedding = t.mean_rows(h);
    }
    return out;
}

namespace {

Matrix eye(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

Matrix off_diagonal_ones(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) m.at(i, j) = i == j ? 0.0 : 1.0;
    }
    return m;
}

Matrix ones_column(int n) {
    Matrix m(n, 1);
    for (double& x : m.data) x = 1.0;
    return m;
}

// One direction of the contrastive objective: anchors za, positives and
// negatives drawn from zb. Inputs are already row-normalized.
Var nce_direction(Tape& t, Var za_n, Var zb_n, double tau) {
    const int n = t.value(za_n).rows;
    Var s_ab = t.scale(t.matmul(za_n, t.transpose(zb_n)), 1.0 / tau);
    Var s_bb = t.scale(t.matmul(zb_n, t.transpose(zb_n)), 1.0 / tau);
    Var ones = t.constant(ones_column(n));
    Var denom = t.log(t.matmul(t.mul(t.exp(s_bb), t.constant(off_diagonal_ones(n))), ones));
    Var pos = t.matmul(t.mul(s_ab, t.constant(eye(n))), ones);
    return t.scale(t.sum_all(t.sub(denom, pos)), 1.0 / n);
}

}  // namespace

Var info_nce(Tape& t, const std::vector<Var>& z_e, const std::vector<Var>& z_f, double tau,
             bool symmetric) {
    if (z_e.size() != z_f.size()) {
        throw std::invalid_argument("info_nce: view lists must be the same length");
    }
    if (z_e.size() < 2) {
        throw std::invalid_argument("info_nce: needs at least two graphs for negatives");
    }
    if (!(tau > 0.0)) throw std::invalid_argument("info_nce: tau must be positive");
    Var ze_n = t.l2_normalize_rows(t.concat_rows(z_e));
    Var zf_n = t.l2_normalize_rows(t.concat_rows(z_f));
    Var fwd = nce_direction(t, ze_n, zf_n, tau);
    if (!symmetric) return fwd;
    Var bwd = nce_direction(t, zf_n, ze_n, tau);
    return t.scale(t.add(fwd, bwd), 0.5);
}

namespace {

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

double topo_direction(const std::vector<const TopoVector*>& a,
                      const std::vector<const TopoVector*>& b, double tau) {
    const std::size_t n = a.size();
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double denom = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            if (k == i) continue;
            denom += std::exp(cosine(b[i]->values, b[k]->values) / tau);
        }
        loss += std::log(denom) - cosine(a[i]->values, b[i]->values) / tau;
    }
    return loss / static_cast<double>(n);
}

}  // namespace

double topo_nce(const std::vector<TopoVector>& to_e, const std::vector<TopoVector>& to_f,
                double tau, bool symmetric) {
    if (to_e.size() != to_f.size()) {
        throw std::invalid_argument("topo_nce: view lists must be the same length");
    }
    if (to_e.size() < 2) {
        throw std::invalid_argument("topo_nce: needs at least two graphs for negatives");
    }
    if (!(tau > 0.0)) throw std::invalid_argument("topo_nce: tau must be positive");
    for (std::size_t i = 0; i < to_e.size(); ++i) {
        if (to_e[i].values.size() != to_f[i].values.size() ||
            to_e[i].values.size() != to_e[0].values.size()) {
            throw std::invalid_argument("topo_nce: descriptor lengths differ");
        }
    }
    std::vector<const TopoVector*> e, f;
    for (const TopoVector& v : to_e) e.push_back(&v);
    for (const TopoVector& v : to_f) f.push_back(&v);
    const double fwd = topo_direction(e, f, tau);
    if (!symmetric) return fwd;
    return 0.5 * (fwd + topo_direction(f, e, tau));
}

Var bce_loss(Tape& t, Var embeddings, const std::vector<int>& labels, const TapeParams& pv) {
    const int n = t.value(embeddings).rows;
    if (static_cast<int>(labels.size()) != n) {
        throw std::invalid_argument("bce_loss: one label per embedding row required");
    }
    Var logits = t.add_rowvec(t.matmul(embeddings, pv.cls_w), pv.cls_b);
    Var yhat = t.clamp(t.sigmoid(logits), 1e-12, 1.0 - 1e-12);
    Matrix y(n, 1), y_inv(n, 1);
    for (int i = 0; i < n; ++i) {
        if (labels[static_cast<std::size_t>(i)] != 0 && labels[static_cast<std::size_t>(i)] != 1) {
            throw std::invalid_argument("bce_loss: labels must be 0 or 1");
        }
        y.at(i, 0) = labels[static_cast<std::size_t>(i)];
        y_inv.at(i, 0) = 1.0 - y.at(i, 0);
    }
    Var pos = t.mul(t.constant(std::move(y)), t.log(yhat));
    Var neg = t.mul(t.constant(std::move(y_inv)), t.log(t.affine(yhat, -1.0, 1.0)));
    return t.scale(t.sum_all(t.add(pos, neg)), -1.0 / n);
}

Var total_loss(Tape& t, const TapeParams& pv, const BatchGraphs& batch, const LossConfig& lc,
               LossParts* parts) {
    lc.validate();
    const std::size_t n = batch.originals.size();
    if (n == 0) throw std::invalid_argument("total_loss: empty batch");

    std::vector<Var> embeddings;
    std::vector<int> labels;
    embeddings.reserve(n);
    labels.reserve(n);
    for (const Graph* g : batch.originals) {
        if (!g->label) throw std::invalid_argument("total_loss: every graph needs a label");
        embeddings.push_back(encode_graph(t, *g, pv).embedding);
        labels.push_back(*g->label);
    }
    Var loss = bce_loss(t, t.concat_rows(embeddings), labels, pv);
    LossParts lp;
    lp.ce = t.value(loss).at(0, 0);

    // A single-graph batch has no negatives; both contrastive terms drop.
    const bool contrast = n >= 2 && (lc.use_gcl || lc.use_topo);
    if (contrast && lc.use_gcl) {
        if (batch.view_e.size() != n || batch.view_f.size() != n) {
            throw std::invalid_argument("total_loss: contrastive views missing");
        }
        std::vector<Var> z_e, z_f;
        z_e.reserve(n);
        z_f.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            z_e.push_back(encode_graph(t, *batch.view_e[i], pv).embedding);
            z_f.push_back(encode_graph(t, *batch.view_f[i], pv).embedding);
        }
        Var gcl = info_nce(t, z_e, z_f, lc.tau, lc.symmetric_nce);
        lp.gcl = t.value(gcl).at(0, 0);
        loss = t.add(loss, t.scale(gcl, lc.lambda1));
    }
    if (contrast && lc.use_topo) {
        if (batch.topo_e.size() != n || batch.topo_f.size() != n) {
            throw std::invalid_argument("total_loss: topology descriptors missing");
        }
        std::vector<TopoVector> te, tf;
        te.reserve(n);
        tf.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            te.push_back(*batch.topo_e[i]);
            tf.push_back(*batch.topo_f[i]);
        }
        lp.topo = topo_nce(te, tf, lc.tau, lc.symmetric_nce);
        Matrix c(1, 1);
        c.at(0, 0) = lc.lambda2 * lp.topo;
        loss = t.add(loss, t.constant(std::move(c)));
    }
    lp.total = t.value(loss).at(0, 0);
    if (parts) *parts = lp;
    return loss;
}

double predict(const ModelParams& p, const Graph& g) {
    Tape t;
    TapeParams pv = register_params(t, p, false);
    Var emb = encode_graph(t, g, pv).embedding;
    Var logits = t.add_rowvec(t.matmul(emb, pv.cls_w), pv.cls_b);
    Var yhat = t.sigmoid(logits);
    return t.value(yhat).at(0, 0);
}

std::vector<double> readout_scores(const ModelParams& p, const Graph& g) {
    if (!p.cfg.attention_readout) {
        throw std::invalid_argument("readout_scores: model was built without attention readout");
    }
    Tape t;
    TapeParams pv = register_params(t, p, false);
    GraphVars gv = encode_graph(t, g, pv);
    const Matrix& s = t.value(gv.scores);
    std::vector<double> out(static_cast<std::size_t>(s.rows));
    for (int i = 0; i < s.rows; ++i) out[static_cast<std::size_t>(i)] = s.at(i, 0);
    return out;
}

}  // namespace phgcl
