#include "racl/losses.hpp"

#include <algorithm>
#include <cmath>

#include "racl/error.hpp"

namespace racl {

void RaclConfig::validate() const {
    if (beta < 0.0 || beta > 1.0)
        throw invalid_input("RaclConfig: beta must lie in [0,1]");
    if (alpha_per_class.empty())
        throw invalid_input("RaclConfig: alpha_per_class is empty");
    for (double a : alpha_per_class)
        if (a < 0.0 || a >= 1.0)
            throw invalid_input("RaclConfig: alphas must lie in [0,1)");
}

double RaclConfig::resolve_alpha(int y_obs, const ProbDist& p_hat) const {
    if (alpha_selector == AlphaSelector::observed_label)
        return alpha_per_class[static_cast<std::size_t>(y_obs)];
    int top = 0;
    for (int y = 1; y < p_hat.size(); ++y)
        if (p_hat[y] > p_hat[top]) top = y;
    return alpha_per_class[static_cast<std::size_t>(top)];
}

void FocalConfig::validate() const {
    if (gamma < 0.0) throw invalid_input("FocalConfig: gamma must be >= 0");
    if (lambda_mix < 0.0 || lambda_mix > 1.0)
        throw invalid_input("FocalConfig: lambda_mix must lie in [0,1]");
}

double cross_entropy(const ProbDist& p_hat, int y_obs) {
    if (y_obs < 0 || y_obs >= p_hat.size())
        throw invalid_input("cross_entropy: class index out of range");
    return -std::log(std::max(p_hat[y_obs], kLogFloor));
}

double focal_loss(const ProbDist& p_hat, int y_obs, double gamma) {
    if (gamma < 0.0) throw invalid_input("focal_loss: gamma must be >= 0");
    const double ce = cross_entropy(p_hat, y_obs);
    if (gamma == 0.0) return ce;
    return std::pow(1.0 - p_hat[y_obs], gamma) * ce;
}

namespace {

// Plausible-set mass of p_hat under pi; the loss depends on p_hat only
// through this scalar.
double plausible_mass(const ProbDist& p_hat, const PossibilityDist& pi) {
    double s = 0.0;
    for (int y = 0; y < p_hat.size(); ++y)
        if (pi[y] == 1.0) s += p_hat[y];
    return s;
}

} // namespace

RaclLossResult racl_loss(const ProbDist& p_hat, int y_obs, const RaclConfig& cfg) {
    cfg.validate();
    if (y_obs < 0 || y_obs >= p_hat.size())
        throw invalid_input("racl_loss: class index out of range");
    if (static_cast<int>(cfg.alpha_per_class.size()) != p_hat.size())
        throw dimension_mismatch("racl_loss: alpha_per_class size mismatch");

    const double alpha = cfg.resolve_alpha(y_obs, p_hat);
    PossibilityDist pi = elicit_possibility(y_obs, p_hat, cfg.beta, alpha);
    const double s_implausible = 1.0 - plausible_mass(p_hat, pi);
    const bool inside = s_implausible <= alpha + kMembershipTol;
    if (inside) return {0.0, std::move(pi), true};

    const ProbDist target = project(p_hat, pi, alpha);
    return {kl_divergence(target, p_hat), std::move(pi), false};
}

std::vector<double> focal_grad_logits(const Logits& z, int y_obs, double gamma) {
    const ProbDist p = softmax(z);
    if (y_obs < 0 || y_obs >= p.size())
        throw invalid_input("focal_grad_logits: class index out of range");
    const int k = p.size();
    const double pt = p[y_obs];
    std::vector<double> g(static_cast<std::size_t>(k));
    if (gamma == 0.0) {
        for (int j = 0; j < k; ++j)
            g[static_cast<std::size_t>(j)] = p[j] - (j == y_obs ? 1.0 : 0.0);
        return g;
    }
    const double q = 1.0 - pt;
    const double logp = std::log(std::max(pt, kLogFloor));
    // d/dpt of -(1-pt)^gamma * log(pt)
    const double dfl_dpt =
        gamma * std::pow(q, gamma - 1.0) * logp - std::pow(q, gamma) / std::max(pt, kLogFloor);
    for (int j = 0; j < k; ++j) {
        const double dpt_dzj = pt * ((j == y_obs ? 1.0 : 0.0) - p[j]);
        g[static_cast<std::size_t>(j)] = dfl_dpt * dpt_dzj;
    }
    return g;
}

RaclGradResult racl_grad_logits(const Logits& z, int y_obs, const RaclConfig& cfg) {
    cfg.validate();
    const ProbDist p = softmax(z);
    if (y_obs < 0 || y_obs >= p.size())
        throw invalid_input("racl_grad_logits: class index out of range");
    const int k = p.size();

    const double alpha = cfg.resolve_alpha(y_obs, p);
    const PossibilityDist pi = elicit_possibility(y_obs, p, cfg.beta, alpha);
    const double s_plausible = plausible_mass(p, pi);
    const double s_implausible = 1.0 - s_plausible;

    bool stable = std::abs(s_implausible - alpha) > 1e-6;
    for (int y = 0; y < k && stable; ++y)
        if (y != y_obs && std::abs(p[y] - cfg.beta) < 1e-6) stable = false;

    std::vector<double> g(static_cast<std::size_t>(k), 0.0);
    if (s_implausible <= alpha + kMembershipTol)
        return {std::move(g), stable}; // zero branch

    // L(S) = (1-alpha) log((1-alpha)/S) + alpha log(alpha/(1-S)) with
    // S the plausible-set mass; dS/dz_j = p_j([j plausible] - S).
    const double dL_dS =
        -(1.0 - alpha) / s_plausible + alpha / std::max(1.0 - s_plausible, kLogFloor);
    for (int j = 0; j < k; ++j) {
        const double indicator = pi[j] == 1.0 ? 1.0 : 0.0;
        g[static_cast<std::size_t>(j)] = dL_dS * p[j] * (indicator - s_plausible);
    }
    return {std::move(g), stable};
}

LossBreakdown combined_loss(const ProbDist& p_hat, int y_obs,
                            const RaclConfig& racl_cfg, const FocalConfig& focal_cfg) {
    focal_cfg.validate();
    const RaclLossResult r = racl_loss(p_hat, y_obs, racl_cfg);
    const double fl = focal_loss(p_hat, y_obs, focal_cfg.gamma);
    const double lam = focal_cfg.lambda_mix;
    return {r.loss, fl, lam * r.loss + (1.0 - lam) * fl, r.inside};
}

} // namespace racl
