#include "racl/prob.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "racl/error.hpp"

namespace racl {

LabelSpace::LabelSpace(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.size() < 2)
        throw invalid_input("LabelSpace: need at least 2 classes");
    std::unordered_set<std::string> seen(names_.begin(), names_.end());
    if (seen.size() != names_.size())
        throw invalid_input("LabelSpace: class names must be distinct");
}

LabelSpace LabelSpace::numbered(int k) {
    if (k < 2) throw invalid_input("LabelSpace: need at least 2 classes");
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) names.push_back("class_" + std::to_string(i));
    return LabelSpace(std::move(names));
}

ProbDist::ProbDist(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw invalid_input("ProbDist: empty");
    double sum = 0.0;
    for (double v : values_) {
        if (!std::isfinite(v) || v < 0.0)
            throw invalid_input("ProbDist: entries must be finite and nonnegative");
        sum += v;
    }
    if (std::abs(sum - 1.0) > kSimplexTol)
        throw invalid_input("ProbDist: entries sum to " + std::to_string(sum));
    if (sum != 1.0)
        for (double& v : values_) v /= sum;
}

Logits::Logits(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw invalid_input("Logits: empty");
    for (double v : values_)
        if (!std::isfinite(v)) throw invalid_input("Logits: entries must be finite");
}

ProbDist softmax(const Logits& z) {
    const auto& v = z.values();
    const double zmax = *std::max_element(v.begin(), v.end());
    std::vector<double> e(v.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        e[i] = std::exp(v[i] - zmax);
        sum += e[i];
    }
    for (double& x : e) x /= sum;
    return ProbDist(std::move(e));
}

ProbDist degenerate(int y, const LabelSpace& space) {
    const int k = space.num_classes();
    if (y < 0 || y >= k) throw invalid_input("degenerate: class index out of range");
    std::vector<double> v(static_cast<std::size_t>(k), 0.0);
    v[static_cast<std::size_t>(y)] = 1.0;
    return ProbDist(std::move(v));
}

double kl_divergence(const ProbDist& p, const ProbDist& q) {
    if (p.size() != q.size())
        throw dimension_mismatch("kl_divergence: dimension mismatch");
    double acc = 0.0;
    for (int i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) continue;
        acc += p[i] * std::log(p[i] / std::max(q[i], kLogFloor));
    }
    // rounding can leave a tiny negative residue when p == q
    return std::max(acc, 0.0);
}

} // namespace racl
