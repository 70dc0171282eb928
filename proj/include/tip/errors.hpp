#pragma once

#include <stdexcept>
#include <string>

namespace tip {

// Bad sizes, ranges or shapes supplied by the caller. The CLI maps this
// family to exit code 2, everything else to 1.
struct param_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Malformed input file (JSON / CSV). Message carries line context.
struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Operation invoked outside the regime it is defined for, e.g. asking for a
// label-divergence filtration on a pair whose label sequences never diverge.
struct protocol_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Optimization produced a non-finite loss.
struct train_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Non-finite value where a finite one is required.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace tip
