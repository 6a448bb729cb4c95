#pragma once

#include <stdexcept>
#include <string>

namespace creeppatch {

// Invalid user input: bad configuration values, malformed scenario files,
// out-of-domain arguments. Maps to process exit code 2 in the CLI.
class validation_error : public std::invalid_argument {
public:
    explicit validation_error(const std::string& what_arg)
        : std::invalid_argument(what_arg) {}
};

// Numerical failure on valid input: non-convergent quadrature, singular
// system, loss of a required contraction property. Maps to exit code 3.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what_arg)
        : std::runtime_error(what_arg) {}
};

} // namespace creeppatch
