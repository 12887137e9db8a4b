#include "phgcl/augment.hpp"
#include "phgcl/centrality.hpp"
#include "phgcl/checkpoint.hpp"
#include "phgcl/config.hpp"
#include "phgcl/dataset_io.hpp"
#include "phgcl/harness.hpp"
#include "phgcl/model.hpp"
#include "phgcl/rng.hpp"
#include "phgcl/synthetic.hpp"
#include "phgcl/topology.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

using json = nlohmann::json;

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << text;
    if (!out) throw std::runtime_error("write to " + path + " failed");
}

json graph_record(const phgcl::Graph& g) { return json::parse(phgcl::serialize_graph(g)); }

int run_generate(int n_graphs, int n_nodes, int d_f, double class_gap, std::uint64_t seed,
                 const std::string& out) {
    phgcl::Dataset ds = phgcl::generate_synthetic(n_graphs, n_nodes, d_f, class_gap, seed);
    phgcl::save_dataset(ds, out);
    std::cout << "wrote " << ds.graphs.size() << " graphs (d_f=" << ds.d_f << ") to " << out
              << "\n";
    return 0;
}

int run_augment(const std::string& in, double p_e, double p_f, double p_tau, std::uint64_t seed,
                double damping, const std::string& out) {
    phgcl::Dataset ds = phgcl::load_dataset(in);
    phgcl::AugmentConfig cfg{p_e, p_f, p_tau};
    cfg.validate();
    std::string text;
    for (std::size_t i = 0; i < ds.graphs.size(); ++i) {
        const phgcl::Graph& g = ds.graphs[i];
        phgcl::CentralityScores phi = phgcl::pagerank(g, damping);
        phgcl::AugmentedPair pair =
            phgcl::make_views(g, phi, cfg, phgcl::derive_seed(seed, {static_cast<std::uint64_t>(i)}));
        json rec;
        rec["graph"] = i;
        rec["edge_probs"] = pair.edge_probs;
        rec["feat_probs"] = pair.feat_probs;
        rec["mask"] = pair.mask;
        rec["view_e"] = graph_record(pair.view_e);
        rec["view_f"] = graph_record(pair.view_f);
        text += rec.dump();
        text += '\n';
    }
    write_file(out, text);
    std::cout << "wrote " << ds.graphs.size() << " augmented pairs to " << out << "\n";
    return 0;
}

int run_topo_stats(const std::string& in, int top_k, double damping, const std::string& out) {
    if (top_k < 1) throw std::invalid_argument("--top-k must be >= 1");
    phgcl::Dataset ds = phgcl::load_dataset(in);
    std::string text;
    for (std::size_t i = 0; i < ds.graphs.size(); ++i) {
        const phgcl::Graph& g = ds.graphs[i];
        phgcl::CentralityScores phi = phgcl::pagerank(g, damping);
        phgcl::DistanceMatrix dm = phgcl::shortest_paths(g);
        std::vector<int> order(static_cast<std::size_t>(g.n_nodes));
        for (std::size_t v = 0; v < order.size(); ++v) order[v] = static_cast<int>(v);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (phi.scores[static_cast<std::size_t>(a)] != phi.scores[static_cast<std::size_t>(b)])
                return phi.scores[static_cast<std::size_t>(a)] >
                       phi.scores[static_cast<std::size_t>(b)];
            return a < b;
        });
        json top = json::array();
        int limit = std::min<int>(top_k, g.n_nodes);
        for (int r = 0; r < limit; ++r) {
            top.push_back({order[static_cast<std::size_t>(r)],
                           phi.scores[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])]});
        }
        json rec;
        rec["graph"] = i;
        rec["mu"] = dm.mean;
        rec["sigma"] = dm.stddev;
        rec["top_central"] = top;
        text += rec.dump();
        text += '\n';
    }
    write_file(out, text);
    std::cout << "wrote stats for " << ds.graphs.size() << " graphs to " << out << "\n";
    return 0;
}

int run_topo_diagrams(const std::string& in, int k, double damping, const std::string& out) {
    phgcl::Dataset ds = phgcl::load_dataset(in);
    std::string text;
    for (std::size_t i = 0; i < ds.graphs.size(); ++i) {
        const phgcl::Graph& g = ds.graphs[i];
        phgcl::CentralityScores phi = phgcl::pagerank(g, damping);
        std::vector<phgcl::Simplex> stream = phgcl::lower_star_filtration(g, phi.scores);
        phgcl::PersistenceDiagram pd = phgcl::persistence_h0(g, stream);
        phgcl::TopoVector tv = phgcl::topo_descriptor(g, phi, k);
        json pairs = json::array();
        for (const auto& [b, d] : pd.pairs) pairs.push_back({b, d});
        json rec;
        rec["graph"] = i;
        rec["pairs"] = pairs;
        rec["essential"] = pd.essential_births;
        rec["vector"] = tv.values;
        text += rec.dump();
        text += '\n';
    }
    write_file(out, text);
    std::cout << "wrote diagrams for " << ds.graphs.size() << " graphs to " << out << "\n";
    return 0;
}

phgcl::TrainConfig config_for(const std::string& config_path, int threads_override) {
    phgcl::TrainConfig cfg;
    if (!config_path.empty()) cfg = phgcl::load_train_config(config_path);
    if (threads_override > 0) cfg.threads = threads_override;
    cfg.validate();
    return cfg;
}

int run_train(const std::string& in, const std::string& config_path, const std::string& out,
              const std::string& ckpt_path, int threads_override) {
    phgcl::TrainConfig cfg = config_for(config_path, threads_override);
    phgcl::Dataset ds = phgcl::load_dataset(in);
    phgcl::CvResult res = phgcl::cross_validate(ds, cfg);
    std::cout << phgcl::cv_report_table(res);
    if (!out.empty()) write_file(out, phgcl::cv_report_records(res, cfg));
    if (!ckpt_path.empty()) {
        phgcl::Checkpoint ck = phgcl::fit_full(ds, cfg);
        phgcl::save_checkpoint(ck, ckpt_path);
        std::cout << "checkpoint written to " << ckpt_path << "\n";
    }
    return 0;
}

int run_eval(const std::string& ckpt_path, const std::string& in, const std::string& out) {
    phgcl::Checkpoint ck = phgcl::load_checkpoint(ckpt_path);
    phgcl::Dataset ds = phgcl::load_dataset(in);
    std::vector<int> indices(ds.graphs.size());
    for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = static_cast<int>(i);
    phgcl::EvalOutcome ev = phgcl::evaluate_model(ck.params, ds, indices);
    char line[256];
    std::snprintf(line, sizeof line,
                  "eval n=%d acc=%.4f auc=%.4f sen=%.4f spe=%.4f\n",
                  static_cast<int>(indices.size()), ev.acc, ev.auc, ev.sen, ev.spe);
    std::cout << line;
    if (!out.empty()) {
        std::string text;
        for (std::size_t i = 0; i < indices.size(); ++i) {
            json rec;
            rec["graph"] = indices[i];
            rec["label"] = *ds.graphs[static_cast<std::size_t>(indices[i])].label;
            rec["prob"] = ev.scores[i];
            rec["pred"] = ev.scores[i] > 0.5 ? 1 : 0;
            text += rec.dump();
            text += '\n';
        }
        json summary;
        summary["type"] = "summary";
        summary["acc"] = ev.acc;
        summary["auc"] = ev.auc;
        summary["sen"] = ev.sen;
        summary["spe"] = ev.spe;
        text += summary.dump();
        text += '\n';
        write_file(out, text);
    }
    return 0;
}

int run_sweep(const std::string& kind, const std::string& in, const std::string& config_path,
              const std::vector<double>& grid, const std::vector<double>& grid2,
              const std::vector<int>& layer_grid, const std::string& out, int threads_override) {
    phgcl::TrainConfig cfg = config_for(config_path, threads_override);
    phgcl::Dataset ds = phgcl::load_dataset(in);
    std::vector<phgcl::SweepRow> rows;
    if (kind == "sparsity") {
        if (grid.empty()) throw std::invalid_argument("sweep sparsity needs --grid");
        rows = phgcl::sweep_sparsity(ds, cfg, grid);
    } else if (kind == "layers") {
        if (layer_grid.empty()) throw std::invalid_argument("sweep layers needs --grid");
        rows = phgcl::sweep_layers(ds, cfg, layer_grid);
    } else {
        if (grid.empty()) throw std::invalid_argument("sweep lambdas needs --grid");
        rows = phgcl::sweep_lambdas(ds, cfg, grid, grid2.empty() ? grid : grid2);
    }
    std::cout << phgcl::sweep_report_table(kind, rows);
    if (!out.empty()) write_file(out, phgcl::sweep_report_records(kind, rows));
    return 0;
}

int run_ablate(const std::string& in, const std::string& config_path, const std::string& out,
               int threads_override) {
    phgcl::TrainConfig cfg = config_for(config_path, threads_override);
    phgcl::Dataset ds = phgcl::load_dataset(in);
    std::vector<phgcl::SweepRow> rows = phgcl::ablate(ds, cfg);
    std::cout << phgcl::sweep_report_table("ablation", rows);
    if (!out.empty()) write_file(out, phgcl::sweep_report_records("ablation", rows));
    return 0;
}

int run_roi_scores(const std::string& ckpt_path, const std::string& in, const std::string& out) {
    phgcl::Checkpoint ck = phgcl::load_checkpoint(ckpt_path);
    phgcl::Dataset ds = phgcl::load_dataset(in);
    std::string text;
    for (std::size_t i = 0; i < ds.graphs.size(); ++i) {
        std::vector<double> scores = phgcl::readout_scores(ck.params, ds.graphs[i]);
        json arr = json::array();
        for (std::size_t v = 0; v < scores.size(); ++v)
            arr.push_back({static_cast<int>(v), scores[v]});
        json rec;
        rec["graph"] = i;
        rec["scores"] = arr;
        text += rec.dump();
        text += '\n';
    }
    write_file(out, text);
    std::cout << "wrote attention scores for " << ds.graphs.size() << " graphs to " << out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"graph contrastive learning pipeline"};
    app.require_subcommand(1);

    // generate
    int gen_graphs = 200, gen_nodes = 30, gen_df = 8;
    double gen_gap = 0.2;
    std::uint64_t gen_seed = 7;
    std::string gen_out;
    CLI::App* gen = app.add_subcommand("generate", "write a synthetic labelled dataset");
    gen->add_option("--n-graphs", gen_graphs, "number of graphs (even)");
    gen->add_option("--n-nodes", gen_nodes, "nodes per graph");
    gen->add_option("--d-f", gen_df, "feature dimension");
    gen->add_option("--class-gap", gen_gap, "separation between the two classes");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--out", gen_out, "output dataset path")->required();

    // augment
    std::string aug_in, aug_out;
    double aug_pe = 0.2, aug_pf = 0.2, aug_ptau = 0.2, aug_damping = 0.85;
    std::uint64_t aug_seed = 17;
    CLI::App* aug = app.add_subcommand("augment", "emit both views of every graph");
    aug->add_option("--in", aug_in, "input dataset")->required();
    aug->add_option("--p-e", aug_pe, "base edge-removal rate");
    aug->add_option("--p-f", aug_pf, "base feature-mask rate");
    aug->add_option("--p-tau", aug_ptau, "probability cap");
    aug->add_option("--seed", aug_seed, "sampling seed");
    aug->add_option("--damping", aug_damping, "PageRank damping");
    aug->add_option("--out", aug_out, "output path")->required();

    // topo stats / diagrams
    CLI::App* topo = app.add_subcommand("topo", "centrality and persistence reports");
    topo->require_subcommand(1);
    std::string ts_in, ts_out;
    int ts_topk = 5;
    double ts_damping = 0.85;
    CLI::App* tstats = topo->add_subcommand("stats", "per-graph distance stats and central nodes");
    tstats->add_option("--in", ts_in, "input dataset")->required();
    tstats->add_option("--top-k", ts_topk, "central nodes to list");
    tstats->add_option("--damping", ts_damping, "PageRank damping");
    tstats->add_option("--out", ts_out, "output path")->required();
    std::string td_in, td_out;
    int td_k = phgcl::TopoVector::kDefaultK;
    double td_damping = 0.85;
    CLI::App* tdiag = topo->add_subcommand("diagrams", "persistence diagrams and vectors");
    tdiag->add_option("--in", td_in, "input dataset")->required();
    tdiag->add_option("--k", td_k, "descriptor persistence slots");
    tdiag->add_option("--damping", td_damping, "PageRank damping");
    tdiag->add_option("--out", td_out, "output path")->required();

    // train
    std::string tr_in, tr_config, tr_out, tr_ckpt;
    int tr_threads = 0;
    CLI::App* tr = app.add_subcommand("train", "cross-validate and optionally fit a checkpoint");
    tr->add_option("--in", tr_in, "input dataset")->required();
    tr->add_option("--config", tr_config, "key = value config file");
    tr->add_option("--out", tr_out, "report records path");
    tr->add_option("--checkpoint", tr_ckpt, "fit on the full dataset and save here");
    tr->add_option("--threads", tr_threads, "override config thread count");

    // eval
    std::string ev_ckpt, ev_in, ev_out;
    CLI::App* ev = app.add_subcommand("eval", "score a labelled dataset with a checkpoint");
    ev->add_option("--checkpoint", ev_ckpt, "checkpoint path")->required();
    ev->add_option("--in", ev_in, "input dataset")->required();
    ev->add_option("--out", ev_out, "per-graph score records path");

    // sweep
    CLI::App* sw = app.add_subcommand("sweep", "grid runs over one hyperparameter");
    sw->require_subcommand(1);
    std::string sw_in, sw_config, sw_out, sw_kind;
    std::vector<double> sw_grid, sw_grid2;
    std::vector<int> sw_layer_grid;
    int sw_threads = 0;
    for (const char* kind : {"sparsity", "layers", "lambdas"}) {
        CLI::App* sub = sw->add_subcommand(kind);
        sub->add_option("--in", sw_in, "input dataset")->required();
        sub->add_option("--config", sw_config, "key = value config file");
        if (std::string(kind) == "layers") {
            sub->add_option("--grid", sw_layer_grid, "layer counts")->delimiter(',');
        } else {
            sub->add_option("--grid", sw_grid, "grid values")->delimiter(',');
        }
        if (std::string(kind) == "lambdas")
            sub->add_option("--grid2", sw_grid2, "second-axis values (defaults to --grid)")
                ->delimiter(',');
        sub->add_option("--out", sw_out, "report records path");
        sub->add_option("--threads", sw_threads, "override config thread count");
        sub->callback([kind, &sw_kind] { sw_kind = kind; });
    }

    // ablate
    std::string ab_in, ab_config, ab_out;
    int ab_threads = 0;
    CLI::App* ab = app.add_subcommand("ablate", "run the component on/off grid");
    ab->add_option("--in", ab_in, "input dataset")->required();
    ab->add_option("--config", ab_config, "key = value config file");
    ab->add_option("--out", ab_out, "report records path");
    ab->add_option("--threads", ab_threads, "override config thread count");

    // roi-scores
    std::string roi_ckpt, roi_in, roi_out;
    CLI::App* roi = app.add_subcommand("roi-scores", "export per-node attention weights");
    roi->add_option("--checkpoint", roi_ckpt, "checkpoint path")->required();
    roi->add_option("--in", roi_in, "input dataset")->required();
    roi->add_option("--out", roi_out, "output path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return run_generate(gen_graphs, gen_nodes, gen_df, gen_gap, gen_seed, gen_out);
        if (aug->parsed()) return run_augment(aug_in, aug_pe, aug_pf, aug_ptau, aug_seed, aug_damping, aug_out);
        if (topo->parsed()) {
            if (tstats->parsed()) return run_topo_stats(ts_in, ts_topk, ts_damping, ts_out);
            return run_topo_diagrams(td_in, td_k, td_damping, td_out);
        }
        if (tr->parsed()) return run_train(tr_in, tr_config, tr_out, tr_ckpt, tr_threads);
        if (ev->parsed()) return run_eval(ev_ckpt, ev_in, ev_out);
        if (sw->parsed()) return run_sweep(sw_kind, sw_in, sw_config, sw_grid, sw_grid2, sw_layer_grid, sw_out, sw_threads);
        if (ab->parsed()) return run_ablate(ab_in, ab_config, ab_out, ab_threads);
        if (roi->parsed()) return run_roi_scores(roi_ckpt, roi_in, roi_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::cerr << "error: no subcommand\n";
    return 1;
}
