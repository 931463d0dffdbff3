#pragma once

#include <stdexcept>
#include <string>

namespace adpulse {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad or inconsistent user input (config files, CLI, API preconditions).
struct ConfigError : Error {
  using Error::Error;
};

// Physically or mathematically invalid arguments to a library call.
struct DomainError : Error {
  using Error::Error;
};

// A numerical invariant (unitarity, trace, positivity, ...) was violated.
struct InvariantError : Error {
  using Error::Error;
};

}  // namespace adpulse
