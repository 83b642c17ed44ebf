#pragma once

#include <stdexcept>
#include <string>

namespace ccast {

// Bad user input: malformed files, invalid parameter combinations,
// disconnected graphs handed to a builder. CLI maps this to exit code 1.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// An internal guard tripped: instance too large for exact search, retry
// budget exhausted. CLI maps this to exit code 2.
class GuardError : public std::runtime_error {
 public:
  explicit GuardError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ccast
