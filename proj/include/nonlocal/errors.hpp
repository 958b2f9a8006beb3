#pragma once

#include <stdexcept>
#include <string>

namespace nonlocal {

// Error taxonomy, mapped onto process exit codes by the CLI:
// usage/config problems exit 2, numerical failures exit 3.

struct parameter_error : std::invalid_argument {
    explicit parameter_error(const std::string& msg) : std::invalid_argument(msg) {}
};

struct grid_error : parameter_error {
    explicit grid_error(const std::string& msg) : parameter_error(msg) {}
};

struct dimension_error : parameter_error {
    explicit dimension_error(const std::string& msg) : parameter_error(msg) {}
};

struct config_error : parameter_error {
    explicit config_error(const std::string& msg) : parameter_error(msg) {}
};

struct io_error : std::runtime_error {
    explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when a solver norm passes the blow-up threshold; the theory forbids
// blow-up, so this always indicates a defect (bad dt, bad assembly, bad data).
struct blowup_error : numerical_error {
    explicit blowup_error(const std::string& msg) : numerical_error(msg) {}
};

}  // namespace nonlocal
