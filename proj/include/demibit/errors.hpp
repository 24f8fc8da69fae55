#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace demibit {

/// Base of every error thrown by the workbench.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed netlist, generator file or experiment config.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Input lengths or arities that do not fit together.
class ArityError : public Error {
 public:
  using Error::Error;
};

/// An exhaustive enumeration would exceed the configured bit cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// A function-computing circuit has an input on which every branch is Bot.
class TotalityError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its precondition (e.g. D does not break g).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A construction failed a consistency check that its precondition should
/// have guaranteed.
class InternalConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace demibit
