#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rbandit {

// Malformed or out-of-contract arguments.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A computation that cannot be carried out (e.g. factorizing an indefinite
// matrix, non-finite intermediate values).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Filesystem read/write failure; the message names the path.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An iteration cap was hit before the stopping rule fired. Carries the
// objective trace up to the point of failure.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, std::vector<double> trace)
        : std::runtime_error(what), objective_trace(std::move(trace)) {}

    std::vector<double> objective_trace;
};

}  // namespace rbandit
