#pragma once
#include <stdexcept>
#include <string>

namespace polarsim {

// Invalid model or code parameters (domain violations caught at construction).
struct InvalidParams : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Mismatched vector or grid dimensions between operands.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Numerical failure (non-convergent quadrature, degenerate density, ...).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Config file problems; carries a 1-based line number when known (0 = n/a).
struct ConfigError : std::runtime_error {
    int line;
    explicit ConfigError(const std::string& msg, int line_no = 0)
        : std::runtime_error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + msg
                                         : msg),
          line(line_no) {}
};

// Filesystem and file format problems.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace polarsim
