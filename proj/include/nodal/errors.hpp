#pragma once

#include <stdexcept>
#include <string>

namespace nodal {

// Invalid parameters or configuration (the CLI maps this to exit status 2).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A documented precondition of an algorithm does not hold for the given input.
class PreconditionError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// An iteration failed to reach its tolerance (the CLI maps this to exit status 3).
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace nodal
