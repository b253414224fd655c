#pragma once

#include <stdexcept>
#include <string>

namespace hrr {

// Invalid or inconsistent parameters (bad JSON, out-of-domain values).
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Parameters that parse fine but fail a deployability gate.
class GateError : public std::runtime_error {
 public:
  explicit GateError(const std::string& what) : std::runtime_error(what) {}
};

// A task adapter could not complete a cycle.
class TaskError : public std::runtime_error {
 public:
  explicit TaskError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hrr
