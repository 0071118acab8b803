#pragma once

#include <stdexcept>

namespace trustnet {

// Configuration and input-file problems. The CLI maps these to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A call contract was violated (bad argument, malformed input).
struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// An election round ended with fewer than two valid reveals.
struct ElectionFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical breakdown inside the estimator (non-positive innovation
// variance, non-finite update).
struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A scenario could not continue. The CLI maps these to exit code 3.
struct SimAbort : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace trustnet
