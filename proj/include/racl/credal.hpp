#pragma once

#include <vector>

#include "racl/prob.hpp"

namespace racl {

// Membership tolerance on each level-set inequality, so that boundary
// points count as members and the loss stays continuous there.
inline constexpr double kMembershipTol = 1e-12;

// Per-class plausibility upper bounds pi(y) in [0,1] with max 1.
class PossibilityDist {
public:
    explicit PossibilityDist(std::vector<double> values);

    int size() const { return static_cast<int>(values_.size()); }
    double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& values() const { return values_; }

    // true when the values are exactly {1, alpha} (the alpha level may be
    // absent; alpha == 0 is allowed)
    bool is_two_level(double alpha) const;

private:
    std::vector<double> values_;
};

// Cosine decay from beta0 (epoch 0) to beta1 (epoch t_max).
struct BetaSchedule {
    double beta0;
    double beta1;
    int t_max;

    BetaSchedule(double b0, double b1, int tmax);
};

double beta_at(const BetaSchedule& schedule, int t);

// Credal set induced by a possibility distribution: all p with
// sum_{y in Y} p(y) <= max_{y in Y} pi(y) for every subset Y.
class CredalSet {
public:
    explicit CredalSet(PossibilityDist generator) : generator_(std::move(generator)) {}
    const PossibilityDist& generator() const { return generator_; }

private:
    PossibilityDist generator_;
};

// pi(y) = 1 where y == y_obs or p_hat(y) >= beta, alpha otherwise.
PossibilityDist elicit_possibility(int y_obs, const ProbDist& p_hat,
                                   double beta, double alpha);

// Level-set reduction of the subset condition: for every distinct level v
// among pi's values, sum_{y: pi(y) <= v} p(y) <= v + kMembershipTol.
bool contains(const CredalSet& set, const ProbDist& p);

// Exhaustive oracle over all 2^K - 1 nonempty subsets (K <= 16).
bool contains_bruteforce(const CredalSet& set, const ProbDist& p);

// Boundary projection for a two-level pi: mass (1 - alpha) over the
// pi == 1 classes proportionally to p_hat, mass alpha over the rest.
// A zero-mass side falls back to uniform over that side; an empty alpha
// side returns p_hat renormalized over the pi == 1 classes.
ProbDist project(const ProbDist& p_hat, const PossibilityDist& pi, double alpha);

} // namespace racl
