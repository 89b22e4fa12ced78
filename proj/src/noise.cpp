#include "racl/noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "racl/error.hpp"
#include "racl/losses.hpp"
#include "racl/model.hpp"

namespace racl {

int Dataset::dim() const {
    return samples.empty() ? 0 : static_cast<int>(samples.front().features.size());
}

void Dataset::validate() const {
    if (num_classes < 2) throw invalid_input("Dataset: need at least 2 classes");
    const std::size_t d = samples.empty() ? 0 : samples.front().features.size();
    for (const auto& s : samples) {
        if (s.features.size() != d)
            throw invalid_input("Dataset: inconsistent feature dimension");
        if (s.label < 0 || s.label >= num_classes)
            throw invalid_input("Dataset: label out of range");
    }
}

void MisdiagnosisMap::validate(int num_classes) const {
    for (int c = 0; c < num_classes; ++c) {
        const auto it = targets.find(c);
        if (it == targets.end() || it->second.empty())
            throw invalid_input("MisdiagnosisMap: class " + std::to_string(c) +
                                " has no flip targets");
        for (int t : it->second) {
            if (t < 0 || t >= num_classes)
                throw invalid_input("MisdiagnosisMap: target out of range");
            if (t == c)
                throw invalid_input("MisdiagnosisMap: class cannot map to itself");
        }
    }
}

MisdiagnosisMap adjacent_grade_map(int num_classes) {
    if (num_classes < 2)
        throw invalid_input("adjacent_grade_map: need at least 2 classes");
    MisdiagnosisMap map;
    for (int c = 0; c < num_classes; ++c) {
        std::vector<int>& s = map.targets[c];
        if (c > 0) s.push_back(c - 1);
        if (c + 1 < num_classes) s.push_back(c + 1);
    }
    return map;
}

void NoiseConfig::validate() const {
    if (noise_rate < 0.0 || noise_rate >= 1.0)
        throw invalid_input("NoiseConfig: noise_rate must lie in [0,1)");
    if (proxy_fraction <= 0.0 || proxy_fraction >= 1.0)
        throw invalid_input("NoiseConfig: proxy_fraction must lie in (0,1)");
}

Dataset NoisyDataset::observed() const {
    Dataset out;
    out.num_classes = num_classes;
    out.samples.reserve(samples.size());
    for (const auto& s : samples)
        out.samples.push_back({s.id, s.features, s.observed_label});
    return out;
}

std::pair<Dataset, Dataset> stratified_split(const Dataset& dataset,
                                             double fraction, std::uint64_t seed) {
    dataset.validate();
    if (fraction <= 0.0 || fraction >= 1.0)
        throw invalid_input("stratified_split: fraction must lie in (0,1)");

    const int k = dataset.num_classes;
    std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < dataset.samples.size(); ++i)
        by_class[static_cast<std::size_t>(dataset.samples[i].label)].push_back(i);
    for (int c = 0; c < k; ++c)
        if (by_class[static_cast<std::size_t>(c)].empty())
            throw invalid_input("stratified_split: class " + std::to_string(c) +
                                " has no samples");

    // largest-remainder apportionment of round(fraction * N) over classes
    const auto total_target = static_cast<std::int64_t>(
        std::llround(fraction * static_cast<double>(dataset.samples.size())));
    std::vector<std::int64_t> take(static_cast<std::size_t>(k));
    std::vector<std::pair<double, int>> remainders;
    std::int64_t base_sum = 0;
    for (int c = 0; c < k; ++c) {
        const double exact =
            fraction * static_cast<double>(by_class[static_cast<std::size_t>(c)].size());
        take[static_cast<std::size_t>(c)] = static_cast<std::int64_t>(std::floor(exact));
        base_sum += take[static_cast<std::size_t>(c)];
        remainders.emplace_back(-(exact - std::floor(exact)), c);
    }
    std::sort(remainders.begin(), remainders.end());
    std::int64_t extra = total_target - base_sum;
    for (const auto& [neg_rem, c] : remainders) {
        if (extra <= 0) break;
        auto& t = take[static_cast<std::size_t>(c)];
        if (t < static_cast<std::int64_t>(by_class[static_cast<std::size_t>(c)].size())) {
            ++t;
            --extra;
        }
    }

    Rng rng(seed);
    Dataset proxy, target;
    proxy.num_classes = target.num_classes = k;
    for (int c = 0; c < k; ++c) {
        auto& members = by_class[static_cast<std::size_t>(c)];
        rng.shuffle(members);
        for (std::size_t i = 0; i < members.size(); ++i) {
            const auto& s = dataset.samples[members[i]];
            if (i < static_cast<std::size_t>(take[static_cast<std::size_t>(c)]))
                proxy.samples.push_back(s);
            else
                target.samples.push_back(s);
        }
    }
    auto by_id = [](const Sample& a, const Sample& b) { return a.id < b.id; };
    std::sort(proxy.samples.begin(), proxy.samples.end(), by_id);
    std::sort(target.samples.begin(), target.samples.end(), by_id);
    return {std::move(proxy), std::move(target)};
}

std::vector<double> score_with_proxy(const Dataset& proxy_set,
                                     const Dataset& target_set,
                                     const ScorerConfig& scorer,
                                     std::uint64_t seed) {
    proxy_set.validate();
    target_set.validate();
    std::vector<bool> present(static_cast<std::size_t>(proxy_set.num_classes), false);
    for (const auto& s : proxy_set.samples)
        present[static_cast<std::size_t>(s.label)] = true;
    for (int c = 0; c < proxy_set.num_classes; ++c)
        if (!present[static_cast<std::size_t>(c)])
            throw invalid_input("score_with_proxy: proxy set misses class " +
                                std::to_string(c));

    ModelSpec spec;
    spec.kind = ModelSpec::Kind::linear_softmax;
    spec.input_dim = proxy_set.dim();
    spec.num_classes = proxy_set.num_classes;
    Model model(spec);
    Rng rng(seed);
    model.init(rng);

    std::vector<double> grad(model.params().size());
    std::vector<double> velocity(model.params().size(), 0.0);
    std::vector<std::size_t> order(proxy_set.samples.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (int epoch = 0; epoch < scorer.epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(scorer.batch_size)) {
            const std::size_t end =
                std::min(order.size(), start + static_cast<std::size_t>(scorer.batch_size));
            std::fill(grad.begin(), grad.end(), 0.0);
            for (std::size_t i = start; i < end; ++i) {
                const auto& s = proxy_set.samples[order[i]];
                const Logits z = model.forward(s.features);
                const ProbDist p = softmax(z);
                std::vector<double> dz(p.values());
                dz[static_cast<std::size_t>(s.label)] -= 1.0;
                model.backward(s.features, dz, grad);
            }
            const double scale = 1.0 / static_cast<double>(end - start);
            for (std::size_t j = 0; j < grad.size(); ++j) {
                velocity[j] = 0.9 * velocity[j] + grad[j] * scale;
                model.params()[j] -= scorer.learning_rate * velocity[j];
                if (!std::isfinite(model.params()[j]))
                    throw numerical_error("score_with_proxy: scorer diverged at epoch " +
                                          std::to_string(epoch));
            }
        }
    }

    std::vector<double> losses;
    losses.reserve(target_set.samples.size());
    for (const auto& s : target_set.samples) {
        const ProbDist p = softmax(model.forward(s.features));
        losses.push_back(cross_entropy(p, s.label));
    }
    return losses;
}

std::set<std::int64_t> select_candidates(
    const std::vector<std::pair<std::int64_t, double>>& losses, double noise_rate) {
    if (noise_rate < 0.0 || noise_rate >= 1.0)
        throw invalid_input("select_candidates: noise_rate must lie in [0,1)");
    const auto count = static_cast<std::size_t>(
        std::ceil(noise_rate * static_cast<double>(losses.size())));
    std::vector<std::pair<std::int64_t, double>> sorted = losses;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    std::set<std::int64_t> ids;
    for (std::size_t i = 0; i < count && i < sorted.size(); ++i)
        ids.insert(sorted[i].first);
    return ids;
}

NoisyDataset flip_labels(const Dataset& target_set,
                         const std::set<std::int64_t>& candidates,
                         const MisdiagnosisMap& map, std::uint64_t seed,
                         const std::vector<double>* candidate_losses) {
    target_set.validate();
    map.validate(target_set.num_classes);
    if (candidate_losses != nullptr &&
        candidate_losses->size() != target_set.samples.size())
        throw invalid_input("flip_labels: loss vector size mismatch");

    NoisyDataset out;
    out.num_classes = target_set.num_classes;
    out.samples.reserve(target_set.samples.size());
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < target_set.samples.size(); ++i) {
        const auto& s = target_set.samples[i];
        out.samples.push_back({s.id, s.features, s.label, s.label, false,
                               candidate_losses ? (*candidate_losses)[i] : nan});
    }

    // draw order is ascending candidate id
    std::sort(out.samples.begin(), out.samples.end(),
              [](const auto& a, const auto& b) { return a.id < b.id; });
    Rng rng(seed);
    for (auto& s : out.samples) {
        if (!candidates.contains(s.id)) continue;
        const auto& targets = map.targets.at(s.clean_label);
        s.observed_label = targets[static_cast<std::size_t>(rng.below(targets.size()))];
        s.flipped = true;
    }
    for (std::int64_t id : candidates)
        if (std::none_of(out.samples.begin(), out.samples.end(),
                         [id](const auto& s) { return s.id == id && s.flipped; }))
            throw invalid_input("flip_labels: candidate id not in target set");
    return out;
}

NoisyDataset generate_noise(const Dataset& dataset, const MisdiagnosisMap& map,
                            const NoiseConfig& cfg, const ScorerConfig& scorer) {
    cfg.validate();
    dataset.validate();
    map.validate(dataset.num_classes);

    auto [proxy, target] = stratified_split(dataset, cfg.proxy_fraction, cfg.seed);
    const std::vector<double> losses =
        score_with_proxy(proxy, target, scorer, cfg.seed + 1);

    std::set<std::int64_t> candidates;
    if (cfg.bernoulli) {
        Rng rng(cfg.seed + 2);
        for (const auto& s : target.samples)
            if (rng.uniform() < cfg.noise_rate) candidates.insert(s.id);
    } else {
        const auto flips = static_cast<std::size_t>(
            std::ceil(cfg.noise_rate * static_cast<double>(dataset.samples.size())));
        if (flips > target.samples.size())
            throw config_error(
                "generate_noise: noise_rate too high for the non-proxy partition");
        std::vector<std::pair<std::int64_t, double>> id_losses;
        id_losses.reserve(target.samples.size());
        for (std::size_t i = 0; i < target.samples.size(); ++i)
            id_losses.emplace_back(target.samples[i].id, losses[i]);
        std::sort(id_losses.begin(), id_losses.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        for (std::size_t i = 0; i < flips; ++i) candidates.insert(id_losses[i].first);
    }

    NoisyDataset noisy = flip_labels(target, candidates, map, cfg.seed + 3, &losses);

    // proxy samples pass through clean, without a score
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& s : proxy.samples)
        noisy.samples.push_back({s.id, s.features, s.label, s.label, false, nan});
    std::sort(noisy.samples.begin(), noisy.samples.end(),
              [](const auto& a, const auto& b) { return a.id < b.id; });
    return noisy;
}

} // namespace racl
