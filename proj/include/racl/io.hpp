#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "racl/metrics.hpp"
#include "racl/model.hpp"
#include "racl/noise.hpp"
#include "racl/trainer.hpp"

namespace racl::io {

inline constexpr int kFormatVersion = 1;

// Dataset CSV: header "id,feat_0..feat_{d-1},label"
Dataset read_dataset_csv(const std::string& path, int num_classes = 0);
void write_dataset_csv(const std::string& path, const Dataset& data);

// Misdiagnosis map JSON: { "0": [1], "1": [0, 2], ... }
MisdiagnosisMap read_map_json(const std::string& path);
void write_map_json(const std::string& path, const MisdiagnosisMap& map);

// Audit JSON: per-sample provenance plus a config echo
void write_audit_json(const std::string& path, const NoisyDataset& data,
                      const NoiseConfig& cfg);
struct AuditEntry {
    std::int64_t id;
    int clean_label;
    int observed_label;
    bool flipped;
    double candidate_loss;
};
std::vector<AuditEntry> read_audit_json(const std::string& path);

// Warm-up records CSV: sample_id,observed_class,ce_loss
void write_warmup_csv(const std::string& path,
                      const std::vector<WarmupLossRecord>& records);

// Model JSON: spec, per-layer weight arrays, seed, config hash
void write_model_json(const std::string& path, const Model& model,
                      std::uint64_t seed, const std::string& config_hash);
Model read_model_json(const std::string& path);

// TrainingLog: one CSV row per epoch plus a JSON sidecar with the
// per-class snapshot and per-sample warm-up losses
void write_training_log(const std::string& prefix, const TrainingLog& log,
                        const TrainConfig& cfg);

void write_eval_report(const std::string& path, const EvalResult& result,
                       const std::map<std::string, std::string>& config_echo);

std::string eval_summary_line(const EvalResult& result);

// 64-bit FNV-1a, hex-encoded
std::string fnv1a_hex(const std::string& text);

} // namespace racl::io
