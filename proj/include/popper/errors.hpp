// Error types shared across the simulator. Config errors name the violated
// invariant; numerical errors cover resolution limits and null selections.
#pragma once

#include <stdexcept>
#include <string>

namespace popper {

// Invalid user-supplied configuration (CLI exit code 1).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure: resolution limits, convergence, degenerate selections
// (CLI exit code 2).
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Grid cannot represent the requested state; message suggests a usable grid.
struct ResolutionError : NumericalError {
    explicit ResolutionError(const std::string& msg) : NumericalError(msg) {}
};

// Post-selection on an outcome of (numerically) zero probability.
struct NullSelectionError : NumericalError {
    explicit NullSelectionError(const std::string& msg) : NumericalError(msg) {}
};

// Filesystem failure while reading configs or writing reports (CLI exit
// code 3).
struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace popper
