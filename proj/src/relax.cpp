#include "racl/relax.hpp"

#include <algorithm>
#include <cmath>

#include "racl/error.hpp"

namespace racl {

void AlphaParams::validate() const {
    if (!(k > 0.0)) throw invalid_input("AlphaParams: k must be positive");
    if (!(epsilon > 0.0)) throw invalid_input("AlphaParams: epsilon must be positive");
    if (!(alpha_max > 0.0 && alpha_max < 1.0))
        throw invalid_input("AlphaParams: alpha_max must lie in (0,1)");
}

double compute_tau(const std::vector<WarmupLossRecord>& records,
                   TauPolicy policy, double q) {
    if (records.empty()) throw invalid_input("compute_tau: no records");
    if (policy == TauPolicy::mean) {
        double sum = 0.0;
        for (const auto& r : records) sum += r.ce_loss;
        return sum / static_cast<double>(records.size());
    }
    if (q < 0.0 || q > 1.0) throw invalid_input("compute_tau: quantile outside [0,1]");
    std::vector<double> losses;
    losses.reserve(records.size());
    for (const auto& r : records) losses.push_back(r.ce_loss);
    std::sort(losses.begin(), losses.end());
    const double pos = q * static_cast<double>(losses.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = static_cast<std::size_t>(std::ceil(pos));
    const double frac = pos - std::floor(pos);
    return losses[lo] + frac * (losses[hi] - losses[lo]);
}

ClassErrorRates compute_error_rates(const std::vector<WarmupLossRecord>& records,
                                    double tau, const LabelSpace& space) {
    const int k = space.num_classes();
    ClassErrorRates out;
    out.tau = tau;
    out.e.assign(static_cast<std::size_t>(k), 0.0);
    out.sample_counts.assign(static_cast<std::size_t>(k), 0);
    std::vector<std::int64_t> exceed(static_cast<std::size_t>(k), 0);
    for (const auto& r : records) {
        if (r.observed_class < 0 || r.observed_class >= k)
            throw invalid_input("compute_error_rates: class index out of range");
        const auto c = static_cast<std::size_t>(r.observed_class);
        ++out.sample_counts[c];
        if (r.ce_loss > tau) ++exceed[c];
    }
    for (int c = 0; c < k; ++c) {
        const auto ci = static_cast<std::size_t>(c);
        if (out.sample_counts[ci] == 0)
            out.empty_classes.push_back(c); // e(c) stays 0
        else
            out.e[ci] = static_cast<double>(exceed[ci]) /
                        static_cast<double>(out.sample_counts[ci]);
    }
    return out;
}

std::vector<double> compute_alpha(const ClassErrorRates& rates,
                                  const AlphaParams& params) {
    params.validate();
    std::vector<double> alpha(rates.e.size());
    for (std::size_t c = 0; c < rates.e.size(); ++c)
        alpha[c] = std::min(params.k / (rates.e[c] + params.epsilon),
                            params.alpha_max);
    return alpha;
}

} // namespace racl
