#pragma once

#include <stdexcept>
#include <string>

namespace cavloss {

/// Rejected input: bad units, violated preconditions, malformed scenario files.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical routine failed to converge to the requested accuracy.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Physically degenerate configuration (e.g. an ensemble with no cavity coupling).
class DegenerateStateError : public std::runtime_error {
public:
    explicit DegenerateStateError(const std::string& what) : std::runtime_error(what) {}
};

// Process exit codes used by the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitDegenerate = 4;

} // namespace cavloss
