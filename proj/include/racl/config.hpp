#pragma once

#include <string>

#include "racl/noise.hpp"
#include "racl/trainer.hpp"

namespace racl {

// The TOML run configuration shared by the CLI commands. Only the subset
// of TOML needed here is supported: [section] headers, "#" comments, and
// key = string | integer | float | boolean. Unknown sections or keys are
// rejected.
struct RunConfig {
    TrainConfig train;
    NoiseConfig noise;
    ModelSpec::Kind model_kind = ModelSpec::Kind::linear_softmax;
    int hidden_size = 16;
    Averaging averaging = Averaging::macro;

    static RunConfig from_toml_file(const std::string& path);
    static RunConfig from_toml(const std::string& text);

    // canonical key=value serialization (also the config-hash input)
    std::string canonical() const;
};

} // namespace racl
