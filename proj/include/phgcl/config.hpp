#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace phgcl {

// Everything a training run needs. Mirrored one-to-one by the flat
// `key = value` config file format (see parse_train_config).
struct TrainConfig {
    double rho = 0.3;      // sparsity ratio, used when re-deriving edges
    double p_e = 0.2;      // base edge-removal rate
    double p_f = 0.2;      // base feature-mask rate
    double p_tau = 0.2;    // probability cap
    double damping = 0.85; // PageRank damping
    int layers = 2;        // encoder depth L
    int heads = 4;
    int d_h = 16;
    double tau = 0.5;      // contrastive temperature
    double lambda1 = 0.1;  // feature-contrast weight
    double lambda2 = 0.01; // topology-contrast weight
    int epochs = 50;
    int batch_size = 32;
    double base_lr = 3e-3;
    double lr_floor = 1e-5;
    std::uint64_t seed = 17;
    int folds = 5;
    int repeats = 5;
    bool use_augment = true;
    bool use_ddformer = true;  // false trains the plain GCN encoder
    bool use_gcl = true;
    bool use_topo = true;
    bool attention_readout = false;
    bool symmetric_nce = false;  // mirrored contrastive form, not the default objective
    int topo_k = 32;
    int threads = 1;  // folds/repeats run in parallel when > 1

    void validate() const;
};

// Flat `key = value` lines; blank lines and lines starting with # are
// skipped. Unknown keys and malformed values are rejected.
TrainConfig parse_train_config(std::istream& in);
TrainConfig load_train_config(const std::string& path);

// Emits every field in the file format, round-trippable through the parser.
std::string serialize_train_config(const TrainConfig& cfg);

}  // namespace phgcl
