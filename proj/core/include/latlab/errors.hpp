#pragma once

#include <stdexcept>
#include <string>

namespace latlab {

/// Bad user input: malformed config, invalid parameter, violated precondition.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// Numerical failure during a computation (non-finite state, step underflow,
/// Lipschitz budget exceeded). Carries enough context to diagnose the run.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace latlab
