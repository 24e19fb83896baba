#pragma once

#include <stdexcept>
#include <string>

namespace entitycs {

// Bad or missing user input (files, flags, record contents). CLI exit code 1.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Violated internal invariant. CLI exit code 2.
class InternalError : public std::runtime_error {
 public:
  explicit InternalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace entitycs
