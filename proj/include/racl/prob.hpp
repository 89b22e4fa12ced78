#pragma once

#include <span>
#include <string>
#include <vector>

namespace racl {

inline constexpr double kSimplexTol = 1e-9;
inline constexpr double kLogFloor = 1e-12;

// The label set: K distinct class names.
class LabelSpace {
public:
    explicit LabelSpace(std::vector<std::string> names);
    static LabelSpace numbered(int k); // "class_0".."class_{k-1}"

    int num_classes() const { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& names() const { return names_; }

private:
    std::vector<std::string> names_;
};

// A point on the probability simplex. Construction validates: entries
// nonnegative and finite, sum within kSimplexTol of 1 (then renormalized).
class ProbDist {
public:
    explicit ProbDist(std::vector<double> values);

    int size() const { return static_cast<int>(values_.size()); }
    double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& values() const { return values_; }

private:
    std::vector<double> values_;
};

// Raw model scores preceding softmax. All entries must be finite.
class Logits {
public:
    explicit Logits(std::vector<double> values);

    int size() const { return static_cast<int>(values_.size()); }
    double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& values() const { return values_; }

private:
    std::vector<double> values_;
};

ProbDist softmax(const Logits& z);

// One-hot distribution at class y.
ProbDist degenerate(int y, const LabelSpace& space);

// KL(p || q) in nats; q entries are floored at kLogFloor, p entries of 0
// contribute 0.
double kl_divergence(const ProbDist& p, const ProbDist& q);

} // namespace racl
