#include "racl/credal.hpp"

#include <algorithm>
#include <cmath>

#include "racl/error.hpp"

namespace racl {

PossibilityDist::PossibilityDist(std::vector<double> values)
    : values_(std::move(values)) {
    if (values_.empty()) throw invalid_input("PossibilityDist: empty");
    double vmax = 0.0;
    for (double v : values_) {
        if (!std::isfinite(v) || v < 0.0 || v > 1.0)
            throw invalid_input("PossibilityDist: entries must lie in [0,1]");
        vmax = std::max(vmax, v);
    }
    if (vmax != 1.0)
        throw invalid_input("PossibilityDist: max entry must be exactly 1");
}

bool PossibilityDist::is_two_level(double alpha) const {
    for (double v : values_)
        if (v != 1.0 && v != alpha) return false;
    return true;
}

BetaSchedule::BetaSchedule(double b0, double b1, int tmax)
    : beta0(b0), beta1(b1), t_max(tmax) {
    if (!(beta0 >= 0.0 && beta0 <= 1.0 && beta1 >= 0.0 && beta1 <= 1.0))
        throw invalid_input("BetaSchedule: beta0 and beta1 must lie in [0,1]");
    if (beta0 < beta1)
        throw invalid_input("BetaSchedule: schedule must decay (beta0 >= beta1)");
    if (t_max < 1) throw invalid_input("BetaSchedule: t_max must be positive");
}

double beta_at(const BetaSchedule& schedule, int t) {
    if (t < 0 || t > schedule.t_max)
        throw invalid_input("beta_at: epoch index out of range");
    const double phase = static_cast<double>(t) / schedule.t_max * M_PI;
    return schedule.beta1 +
           0.5 * (schedule.beta0 - schedule.beta1) * (1.0 + std::cos(phase));
}

PossibilityDist elicit_possibility(int y_obs, const ProbDist& p_hat,
                                   double beta, double alpha) {
    const int k = p_hat.size();
    if (y_obs < 0 || y_obs >= k)
        throw invalid_input("elicit_possibility: class index out of range");
    if (beta < 0.0 || beta > 1.0)
        throw invalid_input("elicit_possibility: beta must lie in [0,1]");
    if (alpha < 0.0 || alpha >= 1.0)
        throw invalid_input("elicit_possibility: alpha must lie in [0,1)");
    std::vector<double> pi(static_cast<std::size_t>(k));
    for (int y = 0; y < k; ++y)
        pi[static_cast<std::size_t>(y)] =
            (y == y_obs || p_hat[y] >= beta) ? 1.0 : alpha;
    return PossibilityDist(std::move(pi));
}

bool contains(const CredalSet& set, const ProbDist& p) {
    const auto& pi = set.generator();
    const int k = pi.size();
    if (p.size() != k) throw dimension_mismatch("contains: dimension mismatch");
    // sort class indices by level; sweep accumulating p over pi <= v
    std::vector<int> order(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return pi[a] < pi[b]; });
    double mass = 0.0;
    for (int i = 0; i < k; ++i) {
        mass += p[order[static_cast<std::size_t>(i)]];
        const bool last_of_level =
            i + 1 == k || pi[order[static_cast<std::size_t>(i + 1)]] !=
                              pi[order[static_cast<std::size_t>(i)]];
        if (last_of_level &&
            mass > pi[order[static_cast<std::size_t>(i)]] + kMembershipTol)
            return false;
    }
    return true;
}

bool contains_bruteforce(const CredalSet& set, const ProbDist& p) {
    const auto& pi = set.generator();
    const int k = pi.size();
    if (p.size() != k) throw dimension_mismatch("contains_bruteforce: dimension mismatch");
    if (k > 16) throw invalid_input("contains_bruteforce: K > 16 unsupported");
    for (unsigned subset = 1; subset < (1u << k); ++subset) {
        double mass = 0.0;
        double bound = 0.0;
        for (int y = 0; y < k; ++y) {
            if (subset & (1u << y)) {
                mass += p[y];
                bound = std::max(bound, pi[y]);
            }
        }
        if (mass > bound + kMembershipTol) return false;
    }
    return true;
}

ProbDist project(const ProbDist& p_hat, const PossibilityDist& pi, double alpha) {
    const int k = p_hat.size();
    if (pi.size() != k) throw dimension_mismatch("project: dimension mismatch");
    if (alpha < 0.0 || alpha >= 1.0)
        throw invalid_input("project: alpha must lie in [0,1)");
    if (!pi.is_two_level(alpha))
        throw invalid_input("project: pi is not two-leveled at this alpha");

    double mass_one = 0.0, mass_alpha = 0.0;
    int n_one = 0, n_alpha = 0;
    for (int y = 0; y < k; ++y) {
        if (pi[y] == 1.0) {
            mass_one += p_hat[y];
            ++n_one;
        } else {
            mass_alpha += p_hat[y];
            ++n_alpha;
        }
    }

    std::vector<double> out(static_cast<std::size_t>(k), 0.0);
    if (n_alpha == 0) return p_hat; // already confined to the pi == 1 set

    for (int y = 0; y < k; ++y) {
        auto& o = out[static_cast<std::size_t>(y)];
        if (pi[y] == 1.0)
            o = mass_one > 0.0 ? (1.0 - alpha) * p_hat[y] / mass_one
                               : (1.0 - alpha) / n_one;
        else
            o = mass_alpha > 0.0 ? alpha * p_hat[y] / mass_alpha
                                 : alpha / n_alpha;
    }
    return ProbDist(std::move(out));
}

} // namespace racl
