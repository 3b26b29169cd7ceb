#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vterm {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A malformed input record. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message,
             const std::string& file = {})
      : Error((file.empty() ? "" : file + ": ") +
              (line == 0 ? message
                         : "line " + std::to_string(line) + ": " + message)),
        line_(line),
        detail_(message) {}

  std::size_t line() const { return line_; }
  const std::string& detail() const { return detail_; }

 private:
  std::size_t line_;
  std::string detail_;
};

/// Inputs that parse but violate a model invariant.
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// A pipeline stage was invoked before the artifact it depends on exists.
class MissingDependencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace vterm
