#pragma once

#include <stdexcept>

namespace rflow {

// Bad user input: domain violations, malformed configs, dimension mismatches.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Filesystem and serialization failures (bad magic, truncation, header mismatch).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numeric breakdown at runtime: non-finite losses, velocities or gradients.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace rflow
