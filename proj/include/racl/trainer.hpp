#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "racl/credal.hpp"
#include "racl/losses.hpp"
#include "racl/metrics.hpp"
#include "racl/model.hpp"
#include "racl/noise.hpp"
#include "racl/relax.hpp"

namespace racl {

enum class LossKind { racl, ce, focal };

std::string to_string(LossKind kind);
LossKind loss_kind_from_string(const std::string& s);

struct TrainConfig {
    int total_epochs = 30;
    int warmup_epochs = 5;
    double learning_rate = 0.05;
    double warmup_learning_rate = 0.005;
    int batch_size = 64;
    std::uint64_t seed = 0;
    double beta0 = 0.75;
    double beta1 = 0.55;
    AlphaParams alpha_params;
    FocalConfig focal_cfg;
    TauPolicy tau_policy = TauPolicy::mean;
    double tau_quantile = 0.5;
    AlphaSelector alpha_selector = AlphaSelector::observed_label;
    bool reestimate_alpha_per_epoch = false;

    void validate() const;
};

struct EpochLogRow {
    int epoch;          // global index, contiguous from 0
    std::string phase;  // "warmup" | "main"
    double beta;        // NaN during warm-up / non-racl arms
    double mean_racl;
    double mean_focal;
    double mean_combined;
    double train_accuracy;
    std::uint64_t shuffle_seed;
};

struct TrainingLog {
    std::vector<EpochLogRow> epochs;
    std::vector<WarmupLossRecord> warmup_losses;
    std::vector<double> error_rates;  // e(c) snapshot after warm-up
    std::vector<double> alphas;       // alpha(c) snapshot after warm-up
    double tau = 0.0;
    std::vector<int> empty_classes;
    LossKind loss_kind = LossKind::racl;
};

struct TrainResult {
    Model model;
    TrainingLog log;
};

// Isotropic Gaussian clusters; class means sit on a ring (dim == 2, chord
// between neighbours == separation) or on scaled basis vectors (dim > 2,
// pairwise distance == separation, requires K <= dim).
Dataset synth_blobs(int num_classes, int n_per_class, int dim,
                    double separation, std::uint64_t seed);

// Cross-entropy warm-up; returns the trained state and one loss record per
// sample from a full forward pass after the last warm-up epoch.
struct WarmupResult {
    Model model;
    std::vector<WarmupLossRecord> records;
    std::vector<EpochLogRow> epochs;
};
WarmupResult warmup(const ModelSpec& spec, const NoisyDataset& data,
                    const TrainConfig& cfg);

// Algorithm: warm-up, then tau / e(c) / alpha(c) once (frozen), then the
// main phase minimizing the lambda-mixed RACL + focal loss under the
// cosine beta schedule.
TrainResult fit_racl(const NoisyDataset& data, const ModelSpec& spec,
                     const TrainConfig& cfg);

// Same phase structure with a fixed ce or focal loss throughout.
TrainResult fit_baseline(const NoisyDataset& data, const ModelSpec& spec,
                         const TrainConfig& cfg, LossKind loss);

// Softmax scores against the dataset's labels.
EvalResult evaluate(const Model& model, const Dataset& data);

// Per-sample softmax scores, one row per sample.
std::vector<std::vector<double>> score_dataset(const Model& model,
                                               const Dataset& data);

} // namespace racl
