#pragma once

// Error taxonomy. The CLI maps these onto distinct exit codes:
// InputError -> 2, ConfigError -> 3, DomainError/NumericError -> 4.

#include <stdexcept>
#include <string>

namespace tailrisk {

// Mathematical domain violation (argument outside the function's domain).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Invalid configuration or precondition (bad theta range, n too small, ...).
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Numerical failure at runtime (non-convergence, total underflow, ...).
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Problem with user-supplied input files (missing columns, unreadable, ...).
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace tailrisk
