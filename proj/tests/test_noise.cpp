#include <doctest.h>

#include <cmath>
#include <set>

#include "racl/error.hpp"
#include "racl/noise.hpp"
#include "racl/trainer.hpp"

using namespace racl;

namespace {

Dataset counts_dataset(const std::vector<int>& class_counts) {
    Dataset d;
    d.num_classes = static_cast<int>(class_counts.size());
    std::int64_t id = 0;
    for (int c = 0; c < d.num_classes; ++c)
        for (int i = 0; i < class_counts[static_cast<std::size_t>(c)]; ++i)
            d.samples.push_back({id++, {static_cast<double>(c), 0.0}, c});
    return d;
}

std::vector<int> proxy_counts(const Dataset& proxy, int k) {
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (const auto& s : proxy.samples) ++counts[static_cast<std::size_t>(s.label)];
    return counts;
}

} // namespace

TEST_CASE("stratified_split exact proportions") {
    const auto [proxy, target] = stratified_split(counts_dataset({50, 30, 20}), 0.3, 1);
    CHECK(proxy_counts(proxy, 3) == std::vector<int>{15, 9, 6});
    CHECK(proxy.samples.size() + target.samples.size() == 100);
}

TEST_CASE("stratified_split largest-remainder correction") {
    const auto [proxy, target] = stratified_split(counts_dataset({10, 7}), 0.3, 1);
    CHECK(proxy_counts(proxy, 2) == std::vector<int>{3, 2});
    CHECK(proxy.samples.size() == 5); // round(0.3 * 17)
}

TEST_CASE("stratified_split determinism and partition") {
    const Dataset d = counts_dataset({40, 25, 35});
    const auto [p1, t1] = stratified_split(d, 0.3, 99);
    const auto [p2, t2] = stratified_split(d, 0.3, 99);
    REQUIRE(p1.samples.size() == p2.samples.size());
    for (std::size_t i = 0; i < p1.samples.size(); ++i)
        CHECK(p1.samples[i].id == p2.samples[i].id);

    std::set<std::int64_t> ids;
    for (const auto& s : p1.samples) ids.insert(s.id);
    for (const auto& s : t1.samples) ids.insert(s.id);
    CHECK(ids.size() == d.samples.size());
}

TEST_CASE("stratified_split rejects empty classes") {
    Dataset d = counts_dataset({5, 5});
    d.num_classes = 3;
    CHECK_THROWS_AS(stratified_split(d, 0.3, 1), invalid_input);
}

TEST_CASE("select_candidates counts and tie-breaking") {
    std::vector<std::pair<std::int64_t, double>> losses;
    for (int i = 0; i < 100; ++i) losses.emplace_back(i, static_cast<double>(i % 10));
    CHECK(select_candidates(losses, 0.2).size() == 20);
    CHECK(select_candidates(losses, 0.0).empty());

    const auto top = select_candidates({{7, 3.0}, {3, 1.0}, {5, 2.0}}, 1.0 / 3.0);
    CHECK(top == std::set<std::int64_t>{7});

    // ties resolved by ascending id
    const auto tied = select_candidates({{9, 1.0}, {2, 1.0}, {5, 1.0}}, 2.0 / 3.0);
    CHECK(tied == std::set<std::int64_t>{2, 5});
}

TEST_CASE("adjacent_grade_map shapes") {
    const auto m5 = adjacent_grade_map(5);
    CHECK(m5.targets.at(0) == std::vector<int>{1});
    CHECK(m5.targets.at(2) == std::vector<int>{1, 3});
    CHECK(m5.targets.at(4) == std::vector<int>{3});
    const auto m2 = adjacent_grade_map(2);
    CHECK(m2.targets.at(0) == std::vector<int>{1});
    CHECK(m2.targets.at(1) == std::vector<int>{0});
    CHECK_THROWS_AS(adjacent_grade_map(1), invalid_input);
}

TEST_CASE("flip_labels respects the map and the audit invariants") {
    const Dataset d = counts_dataset({20, 20, 20, 20, 20});
    const auto map = adjacent_grade_map(5);
    std::set<std::int64_t> candidates;
    for (const auto& s : d.samples)
        if (s.id % 3 == 0) candidates.insert(s.id);
    const NoisyDataset noisy = flip_labels(d, candidates, map, 7);

    for (const auto& s : noisy.samples) {
        if (s.flipped) {
            CHECK(candidates.contains(s.id));
            CHECK(s.observed_label != s.clean_label);
            const auto& allowed = map.targets.at(s.clean_label);
            CHECK(std::find(allowed.begin(), allowed.end(), s.observed_label) !=
                  allowed.end());
            if (s.clean_label == 2)
                CHECK((s.observed_label == 1 || s.observed_label == 3));
        } else {
            CHECK(s.observed_label == s.clean_label);
        }
    }
}

TEST_CASE("flip_labels with empty candidates changes nothing") {
    const Dataset d = counts_dataset({5, 5});
    const NoisyDataset noisy = flip_labels(d, {}, adjacent_grade_map(2), 1);
    for (const auto& s : noisy.samples) CHECK_FALSE(s.flipped);
}

TEST_CASE("flip_labels with singleton support is deterministic in value") {
    const Dataset d = counts_dataset({10, 10});
    std::set<std::int64_t> candidates;
    for (const auto& s : d.samples)
        if (s.label == 0) candidates.insert(s.id);
    const NoisyDataset noisy = flip_labels(d, candidates, adjacent_grade_map(2), 3);
    for (const auto& s : noisy.samples)
        if (s.flipped) CHECK(s.observed_label == 1);
}

TEST_CASE("score_with_proxy requires every class in the proxy") {
    Dataset bad;
    bad.num_classes = 2;
    for (int i = 0; i < 10; ++i)
        bad.samples.push_back({i, {0.0, 0.0}, 0});
    CHECK_THROWS_AS(score_with_proxy(bad, counts_dataset({5, 5}), {}, 1),
                    invalid_input);
}

TEST_CASE("scorer memorizes its own training data on separable blobs") {
    const Dataset blobs = synth_blobs(3, 60, 2, 10.0, 5);
    const auto losses = score_with_proxy(blobs, blobs, {}, 5);
    double mean = 0.0;
    for (double l : losses) mean += l;
    mean /= static_cast<double>(losses.size());
    CHECK(mean < 0.05);
}

TEST_CASE("mislabeled samples score higher losses than clean ones") {
    // frozen seeded experiment: plant wrong labels in a separable problem
    const Dataset blobs = synth_blobs(3, 100, 2, 10.0, 11);
    const auto [proxy, target] = stratified_split(blobs, 0.3, 11);
    Dataset corrupted = target;
    int planted = 0;
    for (auto& s : corrupted.samples)
        if (s.id % 10 == 0) {
            s.label = (s.label + 1) % 3;
            ++planted;
        }
    const auto losses = score_with_proxy(proxy, corrupted, {}, 12);
    double clean_mean = 0.0, bad_mean = 0.0;
    int clean_n = 0, bad_n = 0;
    int pairs_won = 0, pairs = 0;
    std::vector<double> clean_losses, bad_losses;
    for (std::size_t i = 0; i < corrupted.samples.size(); ++i) {
        if (corrupted.samples[i].id % 10 == 0) {
            bad_mean += losses[i];
            ++bad_n;
            bad_losses.push_back(losses[i]);
        } else {
            clean_mean += losses[i];
            ++clean_n;
            clean_losses.push_back(losses[i]);
        }
    }
    REQUIRE(bad_n == planted);
    for (double b : bad_losses)
        for (double c : clean_losses) {
            ++pairs;
            pairs_won += (b > c);
        }
    CHECK(static_cast<double>(pairs_won) / pairs >= 0.9);
    CHECK(bad_mean / bad_n > clean_mean / clean_n);
}

TEST_CASE("generate_noise flip count, compliance, determinism") {
    const Dataset blobs = synth_blobs(3, 100, 2, 6.0, 21);
    const auto map = adjacent_grade_map(3);
    NoiseConfig cfg;
    cfg.noise_rate = 0.2;
    cfg.seed = 21;

    const NoisyDataset a = generate_noise(blobs, map, cfg);
    const NoisyDataset b = generate_noise(blobs, map, cfg);
    REQUIRE(a.samples.size() == blobs.samples.size());

    std::int64_t flips = 0;
    for (const auto& s : a.samples) {
        flips += s.flipped;
        if (s.flipped) {
            const auto& allowed = map.targets.at(s.clean_label);
            CHECK(std::find(allowed.begin(), allowed.end(), s.observed_label) !=
                  allowed.end());
        }
    }
    CHECK(flips == static_cast<std::int64_t>(
                       std::ceil(cfg.noise_rate * static_cast<double>(blobs.samples.size()))));

    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        CHECK(a.samples[i].id == b.samples[i].id);
        CHECK(a.samples[i].observed_label == b.samples[i].observed_label);
        CHECK(a.samples[i].flipped == b.samples[i].flipped);
    }
}

TEST_CASE("generate_noise bernoulli mode flips only non-proxy samples") {
    const Dataset blobs = synth_blobs(2, 150, 2, 6.0, 31);
    NoiseConfig cfg;
    cfg.noise_rate = 0.25;
    cfg.seed = 31;
    cfg.bernoulli = true;
    const NoisyDataset noisy = generate_noise(blobs, adjacent_grade_map(2), cfg);
    std::int64_t flips = 0;
    for (const auto& s : noisy.samples) flips += s.flipped;
    // binomial(210, 0.25): stay within a generous band
    CHECK(flips > 20);
    CHECK(flips < 90);
}

TEST_CASE("generate_noise rejects rates the partition cannot carry") {
    const Dataset blobs = synth_blobs(2, 50, 2, 6.0, 41);
    NoiseConfig cfg;
    cfg.noise_rate = 0.8; // only 70% of samples are flippable
    cfg.seed = 1;
    CHECK_THROWS_AS(generate_noise(blobs, adjacent_grade_map(2), cfg), config_error);
}

TEST_CASE("NoiseConfig validation") {
    NoiseConfig cfg;
    cfg.noise_rate = 1.0;
    CHECK_THROWS_AS(cfg.validate(), invalid_input);
    cfg = {};
    cfg.proxy_fraction = 0.0;
    CHECK_THROWS_AS(cfg.validate(), invalid_input);
}
