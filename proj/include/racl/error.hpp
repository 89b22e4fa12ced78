#pragma once

#include <stdexcept>
#include <string>

namespace racl {

// Error taxonomy maps one-to-one onto the CLI exit codes:
//   io_error -> 2, config_error / invalid_input -> 3, numerical_error -> 4.
struct invalid_input : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct dimension_mismatch : invalid_input {
    using invalid_input::invalid_input;
};

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace racl
