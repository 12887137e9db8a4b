#include "phgcl/harness.hpp"

#include "phgcl/augment.hpp"
#include "phgcl/centrality.hpp"
#include "phgcl/optimizer.hpp"
#include "phgcl/rng.hpp"
#include "phgcl/sparsify.hpp"
#include "phgcl/topology.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace phgcl {

namespace {

using nlohmann::json;

constexpr std::uint64_t kSplitStream = 0xA1;
constexpr std::uint64_t kRunStream = 0xB2;
constexpr std::uint64_t kInitStream = 0xC3;
constexpr std::uint64_t kShuffleStream = 0xD4;
constexpr std::uint64_t kAugStream = 0xE5;
constexpr std::uint64_t kValStream = 0xF6;
constexpr std::uint64_t kFullFitStream = 0x77;

void require_labels(const Dataset& ds) {
    for (const Graph& g : ds.graphs) {
        if (!g.label) throw std::invalid_argument("harness: every graph needs a label");
    }
}

std::vector<std::vector<int>> chunk_batches(const std::vector<int>& order, int batch_size) {
    std::vector<std::vector<int>> batches;
    for (std::size_t i = 0; i < order.size(); i += static_cast<std::size_t>(batch_size)) {
        const std::size_t end = std::min(order.size(), i + static_cast<std::size_t>(batch_size));
        batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(i),
                             order.begin() + static_cast<std::ptrdiff_t>(end));
    }
    // A trailing single graph cannot form contrastive negatives; fold it
    // into the previous batch instead.
    if (batches.size() >= 2 && batches.back().size() == 1) {
        batches[batches.size() - 2].push_back(batches.back()[0]);
        batches.pop_back();
    }
    return batches;
}

long batches_per_epoch(std::size_t train_size, int batch_size) {
    if (train_size == 0) return 0;
    long k = static_cast<long>((train_size + static_cast<std::size_t>(batch_size) - 1) /
                               static_cast<std::size_t>(batch_size));
    if (k >= 2 && train_size % static_cast<std::size_t>(batch_size) == 1) --k;
    return k;
}

ModelConfig model_config_for(const Dataset& ds, const TrainConfig& cfg) {
    ModelConfig mc;
    mc.d_f = ds.d_f;
    mc.d_h = cfg.d_h;
    mc.heads = cfg.heads;
    mc.layers = cfg.layers;
    mc.use_ddformer = cfg.use_ddformer;
    mc.attention_readout = cfg.attention_readout;
    return mc;
}

struct TrainedRun {
    ModelParams best;
    int best_epoch = 0;
    double best_val_acc = 0.0;
    long steps = 0;
    std::vector<Matrix> adam_m, adam_v;
};

double holdout_accuracy(const ModelParams& params, const Dataset& ds,
                        const std::vector<int>& idx) {
    if (idx.empty()) return 0.0;
    long hits = 0;
    for (int i : idx) {
        const Graph& g = ds.graphs[static_cast<std::size_t>(i)];
        const int pred = predict(params, g) > 0.5 ? 1 : 0;
        if (pred == *g.label) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(idx.size());
}

TrainedRun train_run(const Dataset& ds, const std::vector<int>& train_idx,
                     const std::vector<int>& val_idx, const TrainConfig& cfg,
                     std::uint64_t run_seed) {
    if (train_idx.empty()) throw std::invalid_argument("harness: empty training set");

    ModelParams params = ModelParams::init(model_config_for(ds, cfg),
                                           derive_seed(run_seed, {kInitStream}));
    auto roster = params.roster();
    std::vector<Matrix*> param_ptrs;
    std::vector<Matrix> zero_grads;
    param_ptrs.reserve(roster.size());
    zero_grads.reserve(roster.size());
    for (auto& [name, mat] : roster) {
        param_ptrs.push_back(mat);
        zero_grads.emplace_back(mat->rows, mat->cols);
    }
    Adam adam(param_ptrs);

    LossConfig lc;
    lc.tau = cfg.tau;
    lc.lambda1 = cfg.lambda1;
    lc.lambda2 = cfg.lambda2;
    lc.use_gcl = cfg.use_gcl;
    lc.use_topo = cfg.use_topo;
    lc.symmetric_nce = cfg.symmetric_nce;
    AugmentConfig ac;
    ac.p_e = cfg.p_e;
    ac.p_f = cfg.p_f;
    ac.p_tau = cfg.p_tau;
    ac.validate();

    const long period = static_cast<long>(cfg.epochs) *
                        batches_per_epoch(train_idx.size(), cfg.batch_size);
    long step = 0;

    TrainedRun out;
    out.best = params;
    double best_val = -1.0;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::vector<int> order = train_idx;
        RngStream shuffle_rng(
            derive_seed(run_seed, {kShuffleStream, static_cast<std::uint64_t>(epoch)}));
        shuffle_rng.shuffle(order);

        for (const std::vector<int>& chunk : chunk_batches(order, cfg.batch_size)) {
            Tape t;
            TapeParams pv = register_params(t, params, true);

            BatchGraphs batch;
            std::vector<Graph> own_e, own_f;
            std::vector<TopoVector> topo_e, topo_f;
            for (int i : chunk) {
                batch.originals.push_back(&ds.graphs[static_cast<std::size_t>(i)]);
            }
            const bool need_views = (lc.use_gcl || lc.use_topo) && chunk.size() >= 2;
            if (need_views) {
                own_e.reserve(chunk.size());
                own_f.reserve(chunk.size());
                for (int i : chunk) {
                    const Graph& g = ds.graphs[static_cast<std::size_t>(i)];
                    if (cfg.use_augment) {
                        const CentralityScores phi = pagerank(g, cfg.damping);
                        AugmentedPair pair = make_views(
                            g, phi, ac,
                            derive_seed(run_seed, {kAugStream, static_cast<std::uint64_t>(epoch),
                                                   static_cast<std::uint64_t>(i)}));
                        own_e.push_back(std::move(pair.view_e));
                        own_f.push_back(std::move(pair.view_f));
                    } else {
                        own_e.push_back(g);
                        own_f.push_back(g);
                    }
                }
                if (lc.use_topo) {
                    topo_e.reserve(chunk.size());
                    topo_f.reserve(chunk.size());
                    for (std::size_t k = 0; k < chunk.size(); ++k) {
                        topo_e.push_back(topo_descriptor(
                            own_e[k], pagerank(own_e[k], cfg.damping), cfg.topo_k));
                        topo_f.push_back(topo_descriptor(
                            own_f[k], pagerank(own_f[k], cfg.damping), cfg.topo_k));
                    }
                }
                for (std::size_t k = 0; k < chunk.size(); ++k) {
                    if (lc.use_gcl || lc.use_topo) {
                        batch.view_e.push_back(&own_e[k]);
                        batch.view_f.push_back(&own_f[k]);
                    }
                    if (lc.use_topo) {
                        batch.topo_e.push_back(&topo_e[k]);
                        batch.topo_f.push_back(&topo_f[k]);
                    }
                }
            }

            Var loss = total_loss(t, pv, batch, lc);
            t.backward(loss);

            std::vector<const Matrix*> grads;
            grads.reserve(pv.roster_order.size());
            for (std::size_t k = 0; k < pv.roster_order.size(); ++k) {
                grads.push_back(t.has_grad(pv.roster_order[k]) ? &t.grad(pv.roster_order[k])
                                                               : &zero_grads[k]);
            }
            adam.step(param_ptrs, grads, cosine_lr(step, period, cfg.base_lr, cfg.lr_floor));
            ++step;
        }

        if (!val_idx.empty()) {
            const double val_acc = holdout_accuracy(params, ds, val_idx);
            if (val_acc > best_val) {
                best_val = val_acc;
                out.best = params;
                out.best_epoch = epoch + 1;
                out.best_val_acc = val_acc;
            }
        }
    }
    if (val_idx.empty()) {
        out.best = params;
        out.best_epoch = cfg.epochs;
        out.best_val_acc = 0.0;
    }
    out.steps = step;
    out.adam_m = adam.first_moments();
    out.adam_v = adam.second_moments();
    return out;
}

// 20% of the pool, stratified by class, becomes the validation holdout.
void split_validation(const Dataset& ds, const std::vector<int>& pool, std::uint64_t seed,
                      std::vector<int>& train_out, std::vector<int>& val_out) {
    std::vector<int> by_class[2];
    for (int i : pool) by_class[*ds.graphs[static_cast<std::size_t>(i)].label].push_back(i);
    RngStream rng(seed);
    for (auto& cls : by_class) {
        rng.shuffle(cls);
        const std::size_t n_val = cls.size() / 5;
        for (std::size_t k = 0; k < cls.size(); ++k) {
            (k < n_val ? val_out : train_out).push_back(cls[k]);
        }
    }
    std::sort(train_out.begin(), train_out.end());
    std::sort(val_out.begin(), val_out.end());
}

FoldOutcome run_fold(const Dataset& ds, const TrainConfig& cfg, int repeat, int fold) {
    const auto folds = stratified_folds(
        ds, cfg.folds, derive_seed(cfg.seed, {kSplitStream, static_cast<std::uint64_t>(repeat)}));
    const std::vector<int>& test = folds[static_cast<std::size_t>(fold)];
    std::vector<int> pool;
    for (std::size_t f = 0; f < folds.size(); ++f) {
        if (static_cast<int>(f) == fold) continue;
        pool.insert(pool.end(), folds[f].begin(), folds[f].end());
    }
    std::sort(pool.begin(), pool.end());

    const std::uint64_t run_seed = derive_seed(
        cfg.seed,
        {kRunStream, static_cast<std::uint64_t>(repeat), static_cast<std::uint64_t>(fold)});
    std::vector<int> train_idx, val_idx;
    split_validation(ds, pool, derive_seed(run_seed, {kValStream}), train_idx, val_idx);

    const TrainedRun run = train_run(ds, train_idx, val_idx, cfg, run_seed);
    const EvalOutcome eval = evaluate_model(run.best, ds, test);

    FoldOutcome fo;
    fo.repeat = repeat;
    fo.fold = fold;
    fo.counts = eval.counts;
    fo.acc = eval.acc;
    fo.auc = eval.auc;
    fo.sen = eval.sen;
    fo.spe = eval.spe;
    fo.best_epoch = run.best_epoch;
    fo.best_val_acc = run.best_val_acc;
    return fo;
}

}  // namespace

std::vector<std::vector<int>> stratified_folds(const Dataset& ds, int folds, std::uint64_t seed) {
    if (folds < 1) throw std::invalid_argument("stratified_folds: folds must be >= 1");
    require_labels(ds);
    std::vector<int> by_class[2];
    for (std::size_t i = 0; i < ds.graphs.size(); ++i) {
        by_class[*ds.graphs[i].label].push_back(static_cast<int>(i));
    }
    for (int c = 0; c < 2; ++c) {
        if (static_cast<int>(by_class[c].size()) < folds) {
            throw std::invalid_argument("stratified_folds: class " + std::to_string(c) + " has " +
                                        std::to_string(by_class[c].size()) +
                                        " graphs, fewer than the fold count");
        }
    }
    RngStream rng(derive_seed(seed, {0x5F}));
    std::vector<std::vector<int>> out(static_cast<std::size_t>(folds));
    for (auto& cls : by_class) {
        rng.shuffle(cls);
        for (std::size_t k = 0; k < cls.size(); ++k) {
            out[k % static_cast<std::size_t>(folds)].push_back(cls[k]);
        }
    }
    for (auto& fold : out) std::sort(fold.begin(), fold.end());
    return out;
}

EvalOutcome evaluate_model(const ModelParams& p, const Dataset& ds,
                           const std::vector<int>& indices) {
    EvalOutcome out;
    std::vector<int> labels;
    out.scores.reserve(indices.size());
    labels.reserve(indices.size());
    for (int i : indices) {
        const Graph& g = ds.graphs.at(static_cast<std::size_t>(i));
        if (!g.label) throw std::invalid_argument("evaluate: every graph needs a label");
        const double score = predict(p, g);
        out.scores.push_back(score);
        labels.push_back(*g.label);
        const int pred = score > 0.5 ? 1 : 0;
        if (*g.label == 1) {
            (pred == 1 ? out.counts.tp : out.counts.fn) += 1;
        } else {
            (pred == 0 ? out.counts.tn : out.counts.fp) += 1;
        }
    }
    out.acc = accuracy(out.counts);
    out.sen = sensitivity(out.counts);
    out.spe = specificity(out.counts);
    out.auc = auc(out.scores, labels);
    return out;
}

CvResult cross_validate(const Dataset& ds, const TrainConfig& cfg) {
    cfg.validate();
    ds.validate();
    require_labels(ds);

    struct Job {
        int repeat, fold;
    };
    std::vector<Job> jobs;
    for (int r = 0; r < cfg.repeats; ++r) {
        for (int f = 0; f < cfg.folds; ++f) jobs.push_back(Job{r, f});
    }

    std::vector<FoldOutcome> outcomes(jobs.size());
    if (cfg.threads <= 1) {
        for (std::size_t j = 0; j < jobs.size(); ++j) {
            outcomes[j] = run_fold(ds, cfg, jobs[j].repeat, jobs[j].fold);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr first_error;
        std::mutex error_mutex;
        auto worker = [&] {
            for (;;) {
                const std::size_t j = next.fetch_add(1);
                if (j >= jobs.size()) return;
                try {
                    outcomes[j] = run_fold(ds, cfg, jobs[j].repeat, jobs[j].fold);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        };
        std::vector<std::thread> pool;
        const int n_threads = std::min<int>(cfg.threads, static_cast<int>(jobs.size()));
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (std::thread& th : pool) th.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    CvResult result;
    result.folds = std::move(outcomes);
    std::vector<double> accs, aucs, sens, spes;
    for (const FoldOutcome& fo : result.folds) {
        accs.push_back(fo.acc);
        aucs.push_back(fo.auc);
        sens.push_back(fo.sen);
        spes.push_back(fo.spe);
        result.total += fo.counts;
    }
    result.acc = aggregate(accs);
    result.auc = aggregate(aucs);
    result.sen = aggregate(sens);
    result.spe = aggregate(spes);
    return result;
}

Checkpoint fit_full(const Dataset& ds, const TrainConfig& cfg) {
    cfg.validate();
    ds.validate();
    require_labels(ds);
    std::vector<int> all;
    all.reserve(ds.graphs.size());
    for (std::size_t i = 0; i < ds.graphs.size(); ++i) all.push_back(static_cast<int>(i));
    const TrainedRun run =
        train_run(ds, all, {}, cfg, derive_seed(cfg.seed, {kRunStream, kFullFitStream}));

    Checkpoint ck;
    ck.params = run.best;
    ck.has_adam = true;
    ck.adam_step = run.steps;
    ck.adam_m = run.adam_m;
    ck.adam_v = run.adam_v;
    return ck;
}

Dataset resparsify(const Dataset& ds, double rho) {
    Dataset out;
    out.meta = ds.meta;
    out.d_f = ds.d_f;
    for (std::size_t i = 0; i < ds.graphs.size(); ++i) {
        const Graph& g = ds.graphs[i];
        if (g.features.rows != g.features.cols) {
            throw std::invalid_argument(
                "resparsify: graph " + std::to_string(i) +
                " does not carry a square correlation matrix in its features");
        }
        Graph rebuilt = sparsify(g.features, rho);
        rebuilt.label = g.label;
        out.graphs.push_back(std::move(rebuilt));
    }
    out.validate();
    return out;
}

std::vector<SweepRow> sweep_layers(const Dataset& ds, const TrainConfig& base,
                                   const std::vector<int>& grid) {
    if (grid.empty()) throw std::invalid_argument("sweep_layers: empty grid");
    std::vector<SweepRow> rows;
    for (int layers : grid) {
        TrainConfig cfg = base;
        cfg.layers = layers;
        SweepRow row;
        row.label = "L=" + std::to_string(layers);
        row.cfg = cfg;
        row.result = cross_validate(ds, cfg);
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {
std::string short_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}
}  // namespace

std::vector<SweepRow> sweep_lambdas(const Dataset& ds, const TrainConfig& base,
                                    const std::vector<double>& grid1,
                                    const std::vector<double>& grid2) {
    if (grid1.empty() || grid2.empty()) throw std::invalid_argument("sweep_lambdas: empty grid");
    std::vector<SweepRow> rows;
    for (double l1 : grid1) {
        for (double l2 : grid2) {
            TrainConfig cfg = base;
            cfg.lambda1 = l1;
            cfg.lambda2 = l2;
            SweepRow row;
            row.label = "lambda1=" + short_double(l1) + ",lambda2=" + short_double(l2);
            row.cfg = cfg;
            row.result = cross_validate(ds, cfg);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::vector<SweepRow> sweep_sparsity(const Dataset& ds, const TrainConfig& base,
                                     const std::vector<double>& grid) {
    if (grid.empty()) throw std::invalid_argument("sweep_sparsity: empty grid");
    std::vector<SweepRow> rows;
    for (double rho : grid) {
        TrainConfig cfg = base;
        cfg.rho = rho;
        const Dataset sparsified = resparsify(ds, rho);
        SweepRow row;
        row.label = "rho=" + short_double(rho);
        row.cfg = cfg;
        row.result = cross_validate(sparsified, cfg);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<SweepRow> ablate(const Dataset& ds, const TrainConfig& base) {
    struct RowPlan {
        const char* name;
        bool ddformer, augment, gcl, topo;
    };
    // Weakest to strongest: encoder alone, then + augmentation, then
    // + feature contrast, then + topology contrast.
    static const RowPlan kRows[] = {
        {"gcn", false, false, false, false},
        {"dual_domain", true, false, false, false},
        {"gcn_augment", false, true, false, false},
        {"dual_domain_augment", true, true, false, false},
        {"gcn_contrastive", false, true, true, false},
        {"dual_domain_contrastive", true, true, true, false},
        {"gcn_contrastive_topo", false, true, true, true},
        {"full_model", true, true, true, true},
    };
    std::vector<SweepRow> rows;
    for (const RowPlan& plan : kRows) {
        TrainConfig cfg = base;
        cfg.use_ddformer = plan.ddformer;
        cfg.use_augment = plan.augment;
        cfg.use_gcl = plan.gcl;
        cfg.use_topo = plan.topo;
        SweepRow row;
        row.label = plan.name;
        row.cfg = cfg;
        row.result = cross_validate(ds, cfg);
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

json config_json(const TrainConfig& cfg) {
    json j;
    j["rho"] = cfg.rho;
    j["p_e"] = cfg.p_e;
    j["p_f"] = cfg.p_f;
    j["p_tau"] = cfg.p_tau;
    j["damping"] = cfg.damping;
    j["layers"] = cfg.layers;
    j["heads"] = cfg.heads;
    j["d_h"] = cfg.d_h;
    j["tau"] = cfg.tau;
    j["lambda1"] = cfg.lambda1;
    j["lambda2"] = cfg.lambda2;
    j["epochs"] = cfg.epochs;
    j["batch_size"] = cfg.batch_size;
    j["base_lr"] = cfg.base_lr;
    j["lr_floor"] = cfg.lr_floor;
    j["seed"] = cfg.seed;
    j["folds"] = cfg.folds;
    j["repeats"] = cfg.repeats;
    j["use_augment"] = cfg.use_augment;
    j["use_ddformer"] = cfg.use_ddformer;
    j["use_gcl"] = cfg.use_gcl;
    j["use_topo"] = cfg.use_topo;
    j["attention_readout"] = cfg.attention_readout;
    j["symmetric_nce"] = cfg.symmetric_nce;
    j["topo_k"] = cfg.topo_k;
    j["threads"] = cfg.threads;
    return j;
}

json summary_json(const CvResult& r) {
    json j;
    j["acc_mean"] = r.acc.mean;
    j["acc_std"] = r.acc.stddev;
    j["auc_mean"] = r.auc.mean;
    j["auc_std"] = r.auc.stddev;
    j["sen_mean"] = r.sen.mean;
    j["sen_std"] = r.sen.stddev;
    j["spe_mean"] = r.spe.mean;
    j["spe_std"] = r.spe.stddev;
    j["tp"] = r.total.tp;
    j["tn"] = r.total.tn;
    j["fp"] = r.total.fp;
    j["fn"] = r.total.fn;
    return j;
}

}  // namespace

std::string cv_report_records(const CvResult& r, const TrainConfig& cfg) {
    std::ostringstream out;
    {
        json j;
        j["type"] = "config";
        j["config"] = config_json(cfg);
        out << j.dump() << '\n';
    }
    for (const FoldOutcome& fo : r.folds) {
        json j;
        j["type"] = "fold";
        j["repeat"] = fo.repeat;
        j["fold"] = fo.fold;
        j["acc"] = fo.acc;
        j["auc"] = fo.auc;
        j["sen"] = fo.sen;
        j["spe"] = fo.spe;
        j["tp"] = fo.counts.tp;
        j["tn"] = fo.counts.tn;
        j["fp"] = fo.counts.fp;
        j["fn"] = fo.counts.fn;
        j["best_epoch"] = fo.best_epoch;
        j["best_val_acc"] = fo.best_val_acc;
        out << j.dump() << '\n';
    }
    {
        json j = summary_json(r);
        j["type"] = "summary";
        out << j.dump() << '\n';
    }
    return out.str();
}

namespace {
std::string fixed4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}
}  // namespace

std::string cv_report_table(const CvResult& r) {
    std::ostringstream out;
    out << "repeat fold    acc     auc     sen     spe  best_epoch\n";
    for (const FoldOutcome& fo : r.folds) {
        char line[160];
        std::snprintf(line, sizeof line, "%6d %4d %6.4f %7.4f %7.4f %7.4f %11d\n", fo.repeat,
                      fo.fold, fo.acc, fo.auc, fo.sen, fo.spe, fo.best_epoch);
        out << line;
    }
    out << "mean  ACC " << fixed4(r.acc.mean) << " +/- " << fixed4(r.acc.stddev) << " | AUC "
        << fixed4(r.auc.mean) << " +/- " << fixed4(r.auc.stddev) << " | SEN "
        << fixed4(r.sen.mean) << " +/- " << fixed4(r.sen.stddev) << " | SPE "
        << fixed4(r.spe.mean) << " +/- " << fixed4(r.spe.stddev) << "\n";
    return out.str();
}

std::string sweep_report_records(const std::string& sweep_name,
                                 const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    for (const SweepRow& row : rows) {
        json j = summary_json(row.result);
        j["type"] = "sweep_point";
        j["sweep"] = sweep_name;
        j["label"] = row.label;
        j["config"] = config_json(row.cfg);
        out << j.dump() << '\n';
    }
    return out.str();
}

std::string sweep_report_table(const std::string& sweep_name, const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << sweep_name << " sweep\n";
    std::size_t width = 8;
    for (const SweepRow& row : rows) width = std::max(width, row.label.size());
    for (const SweepRow& row : rows) {
        out << row.label;
        out << std::string(width - row.label.size() + 2, ' ');
        out << "ACC " << fixed4(row.result.acc.mean) << " +/- " << fixed4(row.result.acc.stddev)
            << " | AUC " << fixed4(row.result.auc.mean) << " +/- "
            << fixed4(row.result.auc.stddev) << "\n";
    }
    return out.str();
}

}  // namespace phgcl
