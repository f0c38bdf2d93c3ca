#pragma once

#include <stdexcept>
#include <string>

namespace synctl {

/// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct UnboundFlowError : Error {
  std::string flow;
  explicit UnboundFlowError(const std::string& f)
      : Error("unbound flow: " + f), flow(f) {}
};

struct TypeMismatchError : Error {
  using Error::Error;
};

struct ValidationError : Error {
  using Error::Error;
};

struct InstantaneousCycleError : ValidationError {
  using ValidationError::ValidationError;
};

struct WiringError : ValidationError {
  using ValidationError::ValidationError;
};

struct StateBudgetExceededError : Error {
  using Error::Error;
};

struct NonFiniteDomainError : Error {
  using Error::Error;
};

struct OutsideWinningSetError : Error {
  using Error::Error;
};

struct UnknownEventError : Error {
  std::string event;
  explicit UnknownEventError(const std::string& e)
      : Error("unknown event: " + e), event(e) {}
};

struct UnknownCommandError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

/// Parse-time failure with a 1-based source position.
struct SyntaxError : Error {
  int line;
  int column;
  SyntaxError(int line_, int col, const std::string& msg)
      : Error(std::to_string(line_) + ":" + std::to_string(col) + ": " + msg),
        line(line_), column(col) {}
};

}  // namespace synctl
