#pragma once

#include <stdexcept>
#include <string>

namespace cacc {

// Invalid or inconsistent run configuration (bad values, incompatible
// settings, gain regions, file/initial-state mismatches).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input file (config or trajectory). Messages carry
// "<path>:<line>:" where a specific line is at fault.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure while running a simulation (non-finite state or
// command). Collisions are not errors; they are reported in the results.
class SimError : public std::runtime_error {
 public:
  explicit SimError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace cacc
