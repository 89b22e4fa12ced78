#pragma once

#include <cstdint>
#include <vector>

namespace racl {

enum class Averaging { macro, micro };

struct PerClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::int64_t support = 0;
    bool degenerate = false; // empty denominator hit the 0-convention
};

struct EvalResult {
    double ap_macro = 0.0;
    double auc_macro = 0.0;
    double precision_macro = 0.0;
    double recall_macro = 0.0;
    double f1_macro = 0.0;
    double accuracy = 0.0;
    std::vector<std::vector<std::int64_t>> confusion; // [true][pred]
    std::vector<PerClassMetrics> per_class;
    std::vector<double> auc_per_class; // NaN where not computable
    std::vector<double> ap_per_class;  // NaN where not computable
    std::vector<int> skipped_classes;  // excluded from macro AUC/AP
};

struct OvrResult {
    std::vector<double> per_class; // NaN where not computable
    double macro;                  // mean over computable classes
    std::vector<int> skipped;
};

// Rank-based (tie-averaged) one-vs-rest ROC AUC per class. Classes with no
// positives or no negatives are skipped with a warning entry.
OvrResult roc_auc_ovr(const std::vector<std::vector<double>>& scores,
                      const std::vector<int>& labels, int num_classes);

// Step-wise (interpolation-free) one-vs-rest average precision.
OvrResult average_precision_ovr(const std::vector<std::vector<double>>& scores,
                                const std::vector<int>& labels, int num_classes);

// Per-class precision/recall/F1 with the 0-convention for empty
// denominators, macro averages, and the confusion matrix.
EvalResult classification_report(const std::vector<int>& predictions,
                                 const std::vector<int>& labels, int num_classes);

// Full report: classification_report plus score-based AP and AUC.
EvalResult evaluate_scores(const std::vector<std::vector<double>>& scores,
                           const std::vector<int>& labels, int num_classes);

} // namespace racl
