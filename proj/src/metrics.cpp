#include "racl/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "racl/error.hpp"

namespace racl {

namespace {

void check_inputs(std::size_t n, const std::vector<int>& labels, int num_classes) {
    if (n == 0) throw invalid_input("metrics: empty input");
    if (labels.size() != n) throw dimension_mismatch("metrics: labels size mismatch");
    for (int y : labels)
        if (y < 0 || y >= num_classes)
            throw invalid_input("metrics: label out of range");
}

double finalize_macro(OvrResult& r) {
    double sum = 0.0;
    int n = 0;
    for (double v : r.per_class)
        if (!std::isnan(v)) {
            sum += v;
            ++n;
        }
    if (n == 0) throw invalid_input("metrics: no computable class");
    return sum / n;
}

} // namespace

OvrResult roc_auc_ovr(const std::vector<std::vector<double>>& scores,
                      const std::vector<int>& labels, int num_classes) {
    const std::size_t n = scores.size();
    check_inputs(n, labels, num_classes);
    OvrResult out;
    out.per_class.assign(static_cast<std::size_t>(num_classes),
                         std::numeric_limits<double>::quiet_NaN());

    std::vector<std::size_t> order(n);
    std::vector<double> rank(n);
    for (int c = 0; c < num_classes; ++c) {
        std::int64_t n_pos = 0;
        for (int y : labels) n_pos += (y == c);
        const std::int64_t n_neg = static_cast<std::int64_t>(n) - n_pos;
        if (n_pos == 0 || n_neg == 0) {
            out.skipped.push_back(c);
            continue;
        }
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return scores[a][static_cast<std::size_t>(c)] <
                   scores[b][static_cast<std::size_t>(c)];
        });
        // tie-averaged ranks (1-based)
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n &&
                   scores[order[j + 1]][static_cast<std::size_t>(c)] ==
                       scores[order[i]][static_cast<std::size_t>(c)])
                ++j;
            const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
            for (std::size_t t = i; t <= j; ++t) rank[order[t]] = avg;
            i = j + 1;
        }
        double rank_sum = 0.0;
        for (std::size_t s = 0; s < n; ++s)
            if (labels[s] == c) rank_sum += rank[s];
        const double auc =
            (rank_sum - 0.5 * static_cast<double>(n_pos) * static_cast<double>(n_pos + 1)) /
            (static_cast<double>(n_pos) * static_cast<double>(n_neg));
        out.per_class[static_cast<std::size_t>(c)] = auc;
    }
    out.macro = finalize_macro(out);
    return out;
}

OvrResult average_precision_ovr(const std::vector<std::vector<double>>& scores,
                                const std::vector<int>& labels, int num_classes) {
    const std::size_t n = scores.size();
    check_inputs(n, labels, num_classes);
    OvrResult out;
    out.per_class.assign(static_cast<std::size_t>(num_classes),
                         std::numeric_limits<double>::quiet_NaN());

    std::vector<std::size_t> order(n);
    for (int c = 0; c < num_classes; ++c) {
        std::int64_t n_pos = 0;
        for (int y : labels) n_pos += (y == c);
        if (n_pos == 0 || n_pos == static_cast<std::int64_t>(n)) {
            out.skipped.push_back(c);
            continue;
        }
        std::iota(order.begin(), order.end(), std::size_t{0});
        // descending score, ties broken by ascending index for determinism
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const double sa = scores[a][static_cast<std::size_t>(c)];
            const double sb = scores[b][static_cast<std::size_t>(c)];
            if (sa != sb) return sa > sb;
            return a < b;
        });
        double ap = 0.0;
        std::int64_t hits = 0;
        for (std::size_t k = 0; k < n; ++k) {
            if (labels[order[k]] != c) continue;
            ++hits;
            ap += static_cast<double>(hits) / static_cast<double>(k + 1);
        }
        out.per_class[static_cast<std::size_t>(c)] = ap / static_cast<double>(n_pos);
    }
    out.macro = finalize_macro(out);
    return out;
}

EvalResult classification_report(const std::vector<int>& predictions,
                                 const std::vector<int>& labels, int num_classes) {
    const std::size_t n = predictions.size();
    check_inputs(n, labels, num_classes);
    for (int p : predictions)
        if (p < 0 || p >= num_classes)
            throw invalid_input("classification_report: prediction out of range");

    EvalResult out;
    const auto k = static_cast<std::size_t>(num_classes);
    out.confusion.assign(k, std::vector<std::int64_t>(k, 0));
    std::int64_t correct = 0;
    for (std::size_t i = 0; i < n; ++i) {
        ++out.confusion[static_cast<std::size_t>(labels[i])]
                       [static_cast<std::size_t>(predictions[i])];
        correct += (predictions[i] == labels[i]);
    }
    out.accuracy = static_cast<double>(correct) / static_cast<double>(n);

    out.per_class.resize(k);
    double psum = 0.0, rsum = 0.0, fsum = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
        const std::int64_t tp = out.confusion[c][c];
        std::int64_t row = 0, col = 0;
        for (std::size_t j = 0; j < k; ++j) {
            row += out.confusion[c][j];
            col += out.confusion[j][c];
        }
        auto& m = out.per_class[c];
        m.support = row;
        if (col > 0)
            m.precision = static_cast<double>(tp) / static_cast<double>(col);
        else
            m.degenerate = true;
        if (row > 0)
            m.recall = static_cast<double>(tp) / static_cast<double>(row);
        else
            m.degenerate = true;
        if (m.precision + m.recall > 0.0)
            m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
        psum += m.precision;
        rsum += m.recall;
        fsum += m.f1;
    }
    out.precision_macro = psum / static_cast<double>(k);
    out.recall_macro = rsum / static_cast<double>(k);
    out.f1_macro = fsum / static_cast<double>(k);
    return out;
}

EvalResult evaluate_scores(const std::vector<std::vector<double>>& scores,
                           const std::vector<int>& labels, int num_classes) {
    std::vector<int> predictions;
    predictions.reserve(scores.size());
    for (const auto& row : scores) {
        if (static_cast<int>(row.size()) != num_classes)
            throw dimension_mismatch("evaluate_scores: score row size mismatch");
        predictions.push_back(static_cast<int>(
            std::max_element(row.begin(), row.end()) - row.begin()));
    }
    EvalResult out = classification_report(predictions, labels, num_classes);
    OvrResult auc = roc_auc_ovr(scores, labels, num_classes);
    OvrResult ap = average_precision_ovr(scores, labels, num_classes);
    out.auc_macro = auc.macro;
    out.ap_macro = ap.macro;
    out.auc_per_class = std::move(auc.per_class);
    out.ap_per_class = std::move(ap.per_class);
    out.skipped_classes = auc.skipped;
    return out;
}

} // namespace racl
