#pragma once

#include "phgcl/checkpoint.hpp"
#include "phgcl/config.hpp"
#include "phgcl/graph.hpp"
#include "phgcl/metrics.hpp"
#include "phgcl/model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace phgcl {

struct FoldOutcome {
    int repeat = 0;
    int fold = 0;
    Confusion counts;
    double acc = 0.0;
    double auc = 0.0;
    double sen = 0.0;
    double spe = 0.0;
    int best_epoch = 0;       // 1-based epoch whose validation ACC won
    double best_val_acc = 0.0;
};

struct CvResult {
    std::vector<FoldOutcome> folds;  // ordered by (repeat, fold)
    Aggregate acc, auc, sen, spe;
    Confusion total;
};

// Per-class shuffle, then round-robin assignment, so every fold's class
// ratio stays within one graph of the global ratio. Throws when a class
// has fewer graphs than folds.
std::vector<std::vector<int>> stratified_folds(const Dataset& ds, int folds, std::uint64_t seed);

// Stratified k-fold cross-validation, repeated cfg.repeats times with
// fresh splits. Within each fold, 20% of the training graphs are held out
// and the epoch with the best validation accuracy supplies the tested
// model. Runs folds in parallel when cfg.threads > 1; results do not
// depend on the thread count.
CvResult cross_validate(const Dataset& ds, const TrainConfig& cfg);

// One model trained on the whole dataset; checkpoint carries the
// optimizer state.
Checkpoint fit_full(const Dataset& ds, const TrainConfig& cfg);

struct EvalOutcome {
    Confusion counts;
    double acc = 0.0;
    double auc = 0.0;
    double sen = 0.0;
    double spe = 0.0;
    std::vector<double> scores;  // aligned with the evaluated indices
};

// Scores each selected graph and applies the 0.5 decision threshold.
EvalOutcome evaluate_model(const ModelParams& p, const Dataset& ds,
                           const std::vector<int>& indices);

struct SweepRow {
    std::string label;
    TrainConfig cfg;
    CvResult result;
};

std::vector<SweepRow> sweep_layers(const Dataset& ds, const TrainConfig& base,
                                   const std::vector<int>& grid);
std::vector<SweepRow> sweep_lambdas(const Dataset& ds, const TrainConfig& base,
                                    const std::vector<double>& grid1,
                                    const std::vector<double>& grid2);
std::vector<SweepRow> sweep_sparsity(const Dataset& ds, const TrainConfig& base,
                                     const std::vector<double>& grid);

// The eight encoder/augment/contrast/topology combinations, weakest first;
// the last row is the full model.
std::vector<SweepRow> ablate(const Dataset& ds, const TrainConfig& base);

// Rebuilds every graph's edge set from its correlation-row features at
// sparsity rho. Requires square, symmetric feature matrices.
Dataset resparsify(const Dataset& ds, double rho);

// Line-delimited JSON records and fixed-width text tables. Both are
// byte-stable for a given (dataset, config, seed).
std::string cv_report_records(const CvResult& r, const TrainConfig& cfg);
std::string cv_report_table(const CvResult& r);
std::string sweep_report_records(const std::string& sweep_name,
                                 const std::vector<SweepRow>& rows);
std::string sweep_report_table(const std::string& sweep_name, const std::vector<SweepRow>& rows);

}  // namespace phgcl
