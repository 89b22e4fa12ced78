#include "racl/model.hpp"

#include <cmath>

#include "racl/error.hpp"
#include "racl/kernels.hpp"

namespace racl {

void ModelSpec::validate() const {
    if (input_dim < 1) throw invalid_input("ModelSpec: input_dim must be positive");
    if (num_classes < 2) throw invalid_input("ModelSpec: need at least 2 classes");
    if (kind == Kind::mlp && hidden_size < 1)
        throw invalid_input("ModelSpec: hidden_size must be positive");
}

std::string to_string(ModelSpec::Kind kind) {
    return kind == ModelSpec::Kind::linear_softmax ? "linear_softmax" : "mlp";
}

ModelSpec::Kind model_kind_from_string(const std::string& s) {
    if (s == "linear_softmax") return ModelSpec::Kind::linear_softmax;
    if (s == "mlp") return ModelSpec::Kind::mlp;
    throw config_error("unknown model kind: " + s);
}

namespace {

std::size_t param_count(const ModelSpec& s) {
    const auto d = static_cast<std::size_t>(s.input_dim);
    const auto k = static_cast<std::size_t>(s.num_classes);
    if (s.kind == ModelSpec::Kind::linear_softmax) return k * d + k;
    const auto h = static_cast<std::size_t>(s.hidden_size);
    return h * d + h + k * h + k;
}

} // namespace

Model::Model(ModelSpec spec) : spec_(spec) {
    spec_.validate();
    params_.assign(param_count(spec_), 0.0);
}

void Model::init(Rng& rng) {
    const auto d = static_cast<std::size_t>(spec_.input_dim);
    if (spec_.kind == ModelSpec::Kind::linear_softmax) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(d));
        for (double& p : params_) p = rng.uniform(-bound, bound);
        return;
    }
    const auto h = static_cast<std::size_t>(spec_.hidden_size);
    const double b1 = 1.0 / std::sqrt(static_cast<double>(d));
    const double b2 = 1.0 / std::sqrt(static_cast<double>(h));
    std::size_t i = 0;
    for (; i < h * d + h; ++i) params_[i] = rng.uniform(-b1, b1);
    for (; i < params_.size(); ++i) params_[i] = rng.uniform(-b2, b2);
}

Logits Model::forward(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != spec_.input_dim)
        throw dimension_mismatch("Model::forward: feature dimension mismatch");
    const auto d = static_cast<std::size_t>(spec_.input_dim);
    const auto k = static_cast<std::size_t>(spec_.num_classes);
    std::span<const double> p(params_);

    if (spec_.kind == ModelSpec::Kind::linear_softmax) {
        std::vector<double> z(k);
        kernels::matvec(p.subspan(0, k * d), x, p.subspan(k * d, k), z, k, d);
        return Logits(std::move(z));
    }

    const auto h = static_cast<std::size_t>(spec_.hidden_size);
    std::vector<double> hidden(h);
    kernels::matvec(p.subspan(0, h * d), x, p.subspan(h * d, h), hidden, h, d);
    for (double& v : hidden) v = std::tanh(v);
    std::vector<double> z(k);
    kernels::matvec(p.subspan(h * d + h, k * h), hidden,
                    p.subspan(h * d + h + k * h, k), z, k, h);
    return Logits(std::move(z));
}

void Model::backward(std::span<const double> x, std::span<const double> dlogits,
                     std::span<double> grad) const {
    const auto d = static_cast<std::size_t>(spec_.input_dim);
    const auto k = static_cast<std::size_t>(spec_.num_classes);
    if (grad.size() != params_.size())
        throw dimension_mismatch("Model::backward: grad buffer size mismatch");
    std::span<const double> p(params_);

    if (spec_.kind == ModelSpec::Kind::linear_softmax) {
        for (std::size_t r = 0; r < k; ++r) {
            kernels::axpy(dlogits[r], x, grad.subspan(r * d, d));
            grad[k * d + r] += dlogits[r];
        }
        return;
    }

    const auto h = static_cast<std::size_t>(spec_.hidden_size);
    std::vector<double> pre(h);
    kernels::matvec(p.subspan(0, h * d), x, p.subspan(h * d, h), pre, h, d);
    std::vector<double> act(h);
    for (std::size_t i = 0; i < h; ++i) act[i] = std::tanh(pre[i]);

    const std::size_t w2_off = h * d + h;
    const std::size_t b2_off = w2_off + k * h;

    // output layer
    for (std::size_t r = 0; r < k; ++r) {
        kernels::axpy(dlogits[r], act, grad.subspan(w2_off + r * h, h));
        grad[b2_off + r] += dlogits[r];
    }
    // hidden layer
    std::vector<double> dhidden(h, 0.0);
    for (std::size_t r = 0; r < k; ++r)
        kernels::axpy(dlogits[r], p.subspan(w2_off + r * h, h), dhidden);
    for (std::size_t i = 0; i < h; ++i)
        dhidden[i] *= 1.0 - act[i] * act[i];
    for (std::size_t i = 0; i < h; ++i) {
        kernels::axpy(dhidden[i], x, grad.subspan(i * d, d));
        grad[h * d + i] += dhidden[i];
    }
}

} // namespace racl
