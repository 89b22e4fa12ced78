#pragma once

#include <cstdint>
#include <vector>

#include "racl/prob.hpp"

namespace racl {

// One cross-entropy loss harvested per training sample at the end of the
// warm-up phase.
struct WarmupLossRecord {
    std::int64_t sample_id;
    int observed_class;
    double ce_loss; // nats
};

struct ClassErrorRates {
    std::vector<double> e;                    // per-class error rate in [0,1]
    double tau;                               // loss threshold (nats)
    std::vector<std::int64_t> sample_counts;  // per-class record counts
    std::vector<int> empty_classes;           // classes with no records
};

struct AlphaParams {
    double k = 0.05;
    double epsilon = 0.01;
    double alpha_max = 0.9;

    void validate() const;
};

enum class TauPolicy { mean, quantile };

// mean: arithmetic mean of all losses; quantile: q-quantile with linear
// interpolation.
double compute_tau(const std::vector<WarmupLossRecord>& records,
                   TauPolicy policy, double q = 0.5);

// e(c) = fraction of class-c records with loss strictly greater than tau.
ClassErrorRates compute_error_rates(const std::vector<WarmupLossRecord>& records,
                                    double tau, const LabelSpace& space);

// alpha(c) = min(k / (e(c) + epsilon), alpha_max)
std::vector<double> compute_alpha(const ClassErrorRates& rates,
                                  const AlphaParams& params);

} // namespace racl
