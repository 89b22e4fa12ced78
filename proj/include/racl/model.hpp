#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "racl/prob.hpp"
#include "racl/rng.hpp"

namespace racl {

struct ModelSpec {
    enum class Kind { linear_softmax, mlp };

    Kind kind = Kind::linear_softmax;
    int input_dim = 0;
    int hidden_size = 16; // mlp only
    int num_classes = 0;

    void validate() const;
};

std::string to_string(ModelSpec::Kind kind);
ModelSpec::Kind model_kind_from_string(const std::string& s);

// Softmax classifier head over a flat parameter vector.
//   linear_softmax: W (K x d), b (K)
//   mlp:            W1 (h x d), b1 (h), tanh, W2 (K x h), b2 (K)
class Model {
public:
    explicit Model(ModelSpec spec);

    const ModelSpec& spec() const { return spec_; }
    std::vector<double>& params() { return params_; }
    const std::vector<double>& params() const { return params_; }

    // seeded uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)]
    void init(Rng& rng);

    Logits forward(std::span<const double> x) const;

    // Accumulates d(loss)/d(params) into grad given d(loss)/d(logits).
    void backward(std::span<const double> x, std::span<const double> dlogits,
                  std::span<double> grad) const;

private:
    ModelSpec spec_;
    std::vector<double> params_;
};

} // namespace racl
