#pragma once

#include <vector>

#include "racl/credal.hpp"
#include "racl/prob.hpp"

namespace racl {

enum class AlphaSelector {
    observed_label,  // alpha of the training label's class (default)
    candidate_label, // alpha of the model's top predicted class
};

struct RaclConfig {
    double beta;                          // current confidence threshold
    std::vector<double> alpha_per_class;  // each in [0,1)
    AlphaSelector alpha_selector = AlphaSelector::observed_label;

    void validate() const;
    double resolve_alpha(int y_obs, const ProbDist& p_hat) const;
};

struct FocalConfig {
    double gamma = 2.0;
    double lambda_mix = 0.5; // weight on the credal term in the combined loss

    void validate() const;
};

struct LossBreakdown {
    double racl;
    double focal;
    double combined;
    bool inside_credal_set;
};

struct RaclLossResult {
    double loss;
    PossibilityDist pi;
    bool inside;
};

struct RaclGradResult {
    std::vector<double> grad;
    bool threshold_stable; // false when pi or the membership branch could
                           // flip within ~1e-6 of the evaluation point
};

double cross_entropy(const ProbDist& p_hat, int y_obs);

double focal_loss(const ProbDist& p_hat, int y_obs, double gamma);

// Eq-by-eq composition: elicit pi, check membership by the two-level
// closed form, return 0 inside, else KL(project(p_hat) || p_hat).
RaclLossResult racl_loss(const ProbDist& p_hat, int y_obs, const RaclConfig& cfg);

// Gradient of racl_loss(softmax(z)) with respect to z, holding pi's
// threshold pattern and the membership branch fixed (both are piecewise
// constant in p_hat).
RaclGradResult racl_grad_logits(const Logits& z, int y_obs, const RaclConfig& cfg);

// Gradient of focal_loss(softmax(z)) with respect to z.
std::vector<double> focal_grad_logits(const Logits& z, int y_obs, double gamma);

LossBreakdown combined_loss(const ProbDist& p_hat, int y_obs,
                            const RaclConfig& racl_cfg, const FocalConfig& focal_cfg);

} // namespace racl
