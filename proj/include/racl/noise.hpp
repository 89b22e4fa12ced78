#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <vector>

namespace racl {

struct Sample {
    std::int64_t id;
    std::vector<double> features;
    int label;
};

struct Dataset {
    int num_classes = 0;
    std::vector<Sample> samples;

    int dim() const;
    void validate() const;
};

// Expert-specified flip targets: S(c) is the nonempty set of classes a
// true-class-c sample can be mislabeled as, c itself excluded.
struct MisdiagnosisMap {
    std::map<int, std::vector<int>> targets;

    void validate(int num_classes) const;
};

MisdiagnosisMap adjacent_grade_map(int num_classes);

struct NoiseConfig {
    double noise_rate = 0.1;       // in [0,1)
    double proxy_fraction = 0.3;   // in (0,1)
    std::uint64_t seed = 0;
    bool bernoulli = false;        // literal per-sample flip instead of
                                   // loss-ranked selection

    void validate() const;
};

struct NoisySample {
    std::int64_t id;
    std::vector<double> features;
    int observed_label;
    int clean_label;
    bool flipped;
    double candidate_loss; // NaN when the sample was never scored
};

struct NoisyDataset {
    int num_classes = 0;
    std::vector<NoisySample> samples;

    Dataset observed() const; // training-facing view (clean labels dropped)
};

struct ScorerConfig {
    int epochs = 60;
    double learning_rate = 0.2;
    int batch_size = 32;
};

// Per-class proxy counts follow fraction * count(c) with largest-remainder
// correction so the overall proxy size is round(fraction * N).
std::pair<Dataset, Dataset> stratified_split(const Dataset& dataset,
                                             double fraction, std::uint64_t seed);

// Trains a multinomial logistic scorer on proxy_set, returns the
// cross-entropy loss of every target sample in order.
std::vector<double> score_with_proxy(const Dataset& proxy_set,
                                     const Dataset& target_set,
                                     const ScorerConfig& scorer,
                                     std::uint64_t seed);

// The ceil(r_n * N) ids with the largest losses, ties broken by ascending id.
std::set<std::int64_t> select_candidates(
    const std::vector<std::pair<std::int64_t, double>>& losses, double noise_rate);

NoisyDataset flip_labels(const Dataset& target_set,
                         const std::set<std::int64_t>& candidates,
                         const MisdiagnosisMap& map, std::uint64_t seed,
                         const std::vector<double>* candidate_losses = nullptr);

// Full pipeline: stratified proxy split, proxy-trained scoring of every
// sample, loss-ranked candidate selection of ceil(noise_rate * N) samples
// drawn from the non-proxy partition, misdiagnosis-map flipping. Proxy
// samples stay clean but appear in the output, so the flip count is exact
// relative to the whole input. With cfg.bernoulli each non-proxy sample is
// flipped independently with probability noise_rate instead.
NoisyDataset generate_noise(const Dataset& dataset, const MisdiagnosisMap& map,
                            const NoiseConfig& cfg,
                            const ScorerConfig& scorer = {});

} // namespace racl
