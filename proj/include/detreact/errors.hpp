#pragma once

#include <exception>
#include <stdexcept>
#include <string>

namespace detreact {

/// The topology could not be assembled: duplicate names, conflicting
/// connections, width or type mismatches, invalid timers.
class CompositionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A reaction used a port or action it did not declare.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Physical action scheduled on an environment that is not running.
class ShutdownError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A reaction body failed during execution. Carries the name of the
/// offending reaction and the original exception.
class ExecutionError : public std::runtime_error {
 public:
  ExecutionError(std::string reaction, const std::string& detail, std::exception_ptr cause)
      : std::runtime_error("reaction " + reaction + " failed: " + detail),
        reaction_(std::move(reaction)),
        cause_(std::move(cause)) {}

  [[nodiscard]] const std::string& reaction() const noexcept { return reaction_; }
  [[nodiscard]] std::exception_ptr cause() const noexcept { return cause_; }

 private:
  std::string reaction_;
  std::exception_ptr cause_;
};

}  // namespace detreact
