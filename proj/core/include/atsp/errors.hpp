#pragma once

#include <stdexcept>
#include <string>

namespace atsp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or unusable input. Maps to exit code 1.
class InputError : public Error {
 public:
  using Error::Error;
};

// The input graph is not strongly connected, so the LP has no solution.
class InfeasibleInstance : public InputError {
 public:
  using InputError::InputError;
};

// A caller broke a documented precondition.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// A runtime check of a proven guarantee failed. Maps to exit code 2.
class InternalError : public Error {
 public:
  InternalError(std::string stage, const std::string& what)
      : Error("[" + stage + "] " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

}  // namespace atsp
