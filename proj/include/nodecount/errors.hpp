#pragma once

#include <stdexcept>
#include <string>

namespace nodecount {

/// Raised when input data (CSV rows, reference matrices) is malformed or
/// violates a domain invariant. Mapped to exit code 3 by the CLI.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised for invalid experiment or generator configuration.
/// Mapped to exit code 2 by the CLI.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace nodecount
