#pragma once

#include <stdexcept>
#include <string>

namespace nlocal {

// Matrix shape / qubit-count problems (non-square input, dim not 2^q, ...).
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Domain-invariant failures (asymmetric matrix, non-physical state, bad range).
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Declared size caps (oracle tensor dimension, table availability).
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed user input (network spec files, CLI arguments).
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace nlocal
