#include "racl/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "racl/error.hpp"

namespace racl {

std::string to_string(LossKind kind) {
    switch (kind) {
        case LossKind::racl: return "racl";
        case LossKind::ce: return "ce";
        case LossKind::focal: return "focal";
    }
    return "?";
}

LossKind loss_kind_from_string(const std::string& s) {
    if (s == "racl") return LossKind::racl;
    if (s == "ce") return LossKind::ce;
    if (s == "focal") return LossKind::focal;
    throw config_error("unknown loss kind: " + s);
}

void TrainConfig::validate() const {
    if (total_epochs < 1) throw config_error("TrainConfig: total_epochs must be >= 1");
    if (warmup_epochs < 0 || warmup_epochs >= total_epochs)
        throw config_error("TrainConfig: need 0 <= warmup_epochs < total_epochs");
    if (!(learning_rate > 0.0) || !(warmup_learning_rate > 0.0))
        throw config_error("TrainConfig: learning rates must be positive");
    if (batch_size < 1) throw config_error("TrainConfig: batch_size must be >= 1");
    if (beta0 < beta1) throw config_error("TrainConfig: beta schedule must decay");
    if (beta0 < 0.0 || beta0 > 1.0 || beta1 < 0.0 || beta1 > 1.0)
        throw config_error("TrainConfig: beta0/beta1 must lie in [0,1]");
    alpha_params.validate();
    focal_cfg.validate();
    if (tau_quantile < 0.0 || tau_quantile > 1.0)
        throw config_error("TrainConfig: tau_quantile must lie in [0,1]");
}

Dataset synth_blobs(int num_classes, int n_per_class, int dim,
                    double separation, std::uint64_t seed) {
    if (num_classes < 2) throw invalid_input("synth_blobs: need at least 2 classes");
    if (dim < 2) throw invalid_input("synth_blobs: dim must be >= 2");
    if (n_per_class < 1) throw invalid_input("synth_blobs: n_per_class must be >= 1");
    if (!(separation > 0.0)) throw invalid_input("synth_blobs: separation must be positive");
    if (dim > 2 && num_classes > dim)
        throw invalid_input("synth_blobs: basis layout needs K <= dim");

    std::vector<std::vector<double>> means(static_cast<std::size_t>(num_classes),
                                           std::vector<double>(static_cast<std::size_t>(dim), 0.0));
    if (dim == 2) {
        const double radius = separation / (2.0 * std::sin(M_PI / num_classes));
        for (int c = 0; c < num_classes; ++c) {
            const double angle = 2.0 * M_PI * c / num_classes;
            means[static_cast<std::size_t>(c)][0] = radius * std::cos(angle);
            means[static_cast<std::size_t>(c)][1] = radius * std::sin(angle);
        }
    } else {
        const double scale = separation / std::sqrt(2.0);
        for (int c = 0; c < num_classes; ++c)
            means[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)] = scale;
    }

    Rng rng(seed);
    Dataset out;
    out.num_classes = num_classes;
    std::int64_t id = 0;
    for (int c = 0; c < num_classes; ++c) {
        for (int i = 0; i < n_per_class; ++i) {
            std::vector<double> x(static_cast<std::size_t>(dim));
            for (int j = 0; j < dim; ++j)
                x[static_cast<std::size_t>(j)] =
                    means[static_cast<std::size_t>(c)][static_cast<std::size_t>(j)] +
                    rng.gaussian();
            out.samples.push_back({id++, std::move(x), c});
        }
    }
    return out;
}

namespace {

std::uint64_t epoch_shuffle_seed(std::uint64_t seed, int epoch) {
    return seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(epoch + 1);
}

// Per-sample loss value and d(loss)/d(logits).
struct SampleEval {
    double racl;
    double focal;
    double combined;
    std::vector<double> dlogits;
};

struct MainLoss {
    LossKind kind;
    const RaclConfig* racl_cfg; // only for LossKind::racl
    double gamma;
    double lambda_mix;

    SampleEval operator()(const Logits& z, const ProbDist& p, int y_obs) const {
        SampleEval out{0.0, 0.0, 0.0, {}};
        if (kind == LossKind::ce) {
            out.focal = cross_entropy(p, y_obs);
            out.combined = out.focal;
            out.dlogits = focal_grad_logits(z, y_obs, 0.0);
            return out;
        }
        if (kind == LossKind::focal) {
            out.focal = focal_loss(p, y_obs, gamma);
            out.combined = out.focal;
            out.dlogits = focal_grad_logits(z, y_obs, gamma);
            return out;
        }
        const RaclLossResult r = racl_loss(p, y_obs, *racl_cfg);
        out.racl = r.loss;
        out.focal = focal_loss(p, y_obs, gamma);
        out.combined = lambda_mix * out.racl + (1.0 - lambda_mix) * out.focal;
        const std::vector<double> gf = focal_grad_logits(z, y_obs, gamma);
        const RaclGradResult gr = racl_grad_logits(z, y_obs, *racl_cfg);
        out.dlogits.resize(gf.size());
        for (std::size_t j = 0; j < gf.size(); ++j)
            out.dlogits[j] = lambda_mix * gr.grad[j] + (1.0 - lambda_mix) * gf[j];
        return out;
    }
};

struct Optimizer {
    double learning_rate;
    std::vector<double> velocity;

    void step(Model& model, std::span<const double> grad, int epoch) {
        auto& params = model.params();
        for (std::size_t j = 0; j < params.size(); ++j) {
            velocity[j] = 0.9 * velocity[j] + grad[j];
            params[j] -= learning_rate * velocity[j];
            if (!std::isfinite(params[j]))
                throw numerical_error("training diverged at epoch " +
                                      std::to_string(epoch));
        }
    }
};

EpochLogRow run_epoch(Model& model, const NoisyDataset& data,
                      const MainLoss& loss, Optimizer& opt, int epoch,
                      const std::string& phase, double beta, int batch_size,
                      std::uint64_t seed) {
    const std::size_t n = data.samples.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    const std::uint64_t shuffle_seed = epoch_shuffle_seed(seed, epoch);
    Rng shuffle_rng(shuffle_seed);
    shuffle_rng.shuffle(order);

    std::vector<double> grad(model.params().size());
    double sum_racl = 0.0, sum_focal = 0.0, sum_combined = 0.0;
    std::int64_t correct = 0;

    std::vector<std::size_t> batch;
    for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(batch_size)) {
        const std::size_t end = std::min(n, start + static_cast<std::size_t>(batch_size));
        batch.assign(order.begin() + static_cast<std::ptrdiff_t>(start),
                     order.begin() + static_cast<std::ptrdiff_t>(end));
        std::sort(batch.begin(), batch.end()); // fixed reduction order
        std::fill(grad.begin(), grad.end(), 0.0);
        const double scale = 1.0 / static_cast<double>(batch.size());
        for (std::size_t i : batch) {
            const auto& s = data.samples[i];
            const Logits z = model.forward(s.features);
            const ProbDist p = softmax(z);
            SampleEval ev = loss(z, p, s.observed_label);
            if (!std::isfinite(ev.combined))
                throw numerical_error("non-finite loss at epoch " + std::to_string(epoch));
            sum_racl += ev.racl;
            sum_focal += ev.focal;
            sum_combined += ev.combined;
            int top = 0;
            for (int y = 1; y < p.size(); ++y)
                if (p[y] > p[top]) top = y;
            correct += (top == s.observed_label);
            for (double& g : ev.dlogits) g *= scale;
            model.backward(s.features, ev.dlogits, grad);
        }
        opt.step(model, grad, epoch);
    }

    const auto nn = static_cast<double>(n);
    return {epoch, phase, beta, sum_racl / nn, sum_focal / nn, sum_combined / nn,
            static_cast<double>(correct) / nn, shuffle_seed};
}

std::vector<WarmupLossRecord> harvest_records(const Model& model,
                                              const NoisyDataset& data) {
    std::vector<WarmupLossRecord> records;
    records.reserve(data.samples.size());
    for (const auto& s : data.samples) {
        const ProbDist p = softmax(model.forward(s.features));
        records.push_back({s.id, s.observed_label, cross_entropy(p, s.observed_label)});
    }
    return records;
}

TrainResult fit_impl(const NoisyDataset& data, const ModelSpec& spec,
                     const TrainConfig& cfg, LossKind kind) {
    cfg.validate();
    spec.validate();
    if (data.samples.empty()) throw invalid_input("fit: empty dataset");
    if (spec.num_classes != data.num_classes)
        throw dimension_mismatch("fit: class count mismatch");

    const double nan = std::numeric_limits<double>::quiet_NaN();
    TrainResult result{Model(spec), {}};
    result.log.loss_kind = kind;
    Rng init_rng(cfg.seed);
    result.model.init(init_rng);

    Optimizer opt{cfg.warmup_learning_rate,
                  std::vector<double>(result.model.params().size(), 0.0)};

    // warm-up: plain cross-entropy
    const MainLoss warmup_loss{LossKind::ce, nullptr, 0.0, 0.0};
    for (int epoch = 0; epoch < cfg.warmup_epochs; ++epoch)
        result.log.epochs.push_back(run_epoch(result.model, data, warmup_loss, opt,
                                              epoch, "warmup", nan, cfg.batch_size,
                                              cfg.seed));

    result.log.warmup_losses = harvest_records(result.model, data);

    RaclConfig racl_cfg;
    if (kind == LossKind::racl) {
        const LabelSpace space = LabelSpace::numbered(data.num_classes);
        result.log.tau = compute_tau(result.log.warmup_losses, cfg.tau_policy,
                                     cfg.tau_quantile);
        const ClassErrorRates rates =
            compute_error_rates(result.log.warmup_losses, result.log.tau, space);
        result.log.error_rates = rates.e;
        result.log.empty_classes = rates.empty_classes;
        result.log.alphas = compute_alpha(rates, cfg.alpha_params);
        racl_cfg.alpha_per_class = result.log.alphas;
        racl_cfg.alpha_selector = cfg.alpha_selector;
    }

    const int main_epochs = cfg.total_epochs - cfg.warmup_epochs;
    const BetaSchedule schedule(cfg.beta0, cfg.beta1, std::max(1, main_epochs - 1));
    opt.learning_rate = cfg.learning_rate;
    std::fill(opt.velocity.begin(), opt.velocity.end(), 0.0);

    for (int t = 0; t < main_epochs; ++t) {
        const int epoch = cfg.warmup_epochs + t;
        double beta = nan;
        MainLoss loss{kind, nullptr, cfg.focal_cfg.gamma, cfg.focal_cfg.lambda_mix};
        if (kind == LossKind::racl) {
            beta = beta_at(schedule, std::min(t, schedule.t_max));
            racl_cfg.beta = beta;
            if (cfg.reestimate_alpha_per_epoch && t > 0) {
                const LabelSpace space = LabelSpace::numbered(data.num_classes);
                const std::vector<WarmupLossRecord> fresh =
                    harvest_records(result.model, data);
                const double tau = compute_tau(fresh, cfg.tau_policy, cfg.tau_quantile);
                racl_cfg.alpha_per_class = compute_alpha(
                    compute_error_rates(fresh, tau, space), cfg.alpha_params);
            }
            loss.racl_cfg = &racl_cfg;
        }
        result.log.epochs.push_back(run_epoch(result.model, data, loss, opt, epoch,
                                              "main", beta, cfg.batch_size, cfg.seed));
    }
    return result;
}

} // namespace

WarmupResult warmup(const ModelSpec& spec, const NoisyDataset& data,
                    const TrainConfig& cfg) {
    cfg.validate();
    spec.validate();
    if (data.samples.empty()) throw invalid_input("warmup: empty dataset");

    const double nan = std::numeric_limits<double>::quiet_NaN();
    WarmupResult out{Model(spec), {}, {}};
    Rng init_rng(cfg.seed);
    out.model.init(init_rng);
    Optimizer opt{cfg.warmup_learning_rate,
                  std::vector<double>(out.model.params().size(), 0.0)};
    const MainLoss loss{LossKind::ce, nullptr, 0.0, 0.0};
    for (int epoch = 0; epoch < cfg.warmup_epochs; ++epoch)
        out.epochs.push_back(run_epoch(out.model, data, loss, opt, epoch, "warmup",
                                       nan, cfg.batch_size, cfg.seed));
    out.records = harvest_records(out.model, data);
    return out;
}

TrainResult fit_racl(const NoisyDataset& data, const ModelSpec& spec,
                     const TrainConfig& cfg) {
    return fit_impl(data, spec, cfg, LossKind::racl);
}

TrainResult fit_baseline(const NoisyDataset& data, const ModelSpec& spec,
                         const TrainConfig& cfg, LossKind loss) {
    if (loss == LossKind::racl)
        throw config_error("fit_baseline: use fit_racl for the racl loss");
    return fit_impl(data, spec, cfg, loss);
}

std::vector<std::vector<double>> score_dataset(const Model& model,
                                               const Dataset& data) {
    if (data.samples.empty()) throw invalid_input("score_dataset: empty dataset");
    if (data.dim() != model.spec().input_dim)
        throw dimension_mismatch("score_dataset: feature dimension mismatch");
    std::vector<std::vector<double>> scores;
    scores.reserve(data.samples.size());
    for (const auto& s : data.samples)
        scores.push_back(softmax(model.forward(s.features)).values());
    return scores;
}

EvalResult evaluate(const Model& model, const Dataset& data) {
    std::vector<int> labels;
    labels.reserve(data.samples.size());
    for (const auto& s : data.samples) labels.push_back(s.label);
    return evaluate_scores(score_dataset(model, data), labels,
                           model.spec().num_classes);
}

} // namespace racl
