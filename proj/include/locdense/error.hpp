#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace locdense {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input. `line` is 1-based (0 when unknown), `offset` is a byte offset.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t line, std::size_t offset)
      : Error(what + " (line " + std::to_string(line) + ", byte " + std::to_string(offset) + ")"),
        line_(line), offset_(offset) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t line_;
  std::size_t offset_;
};

/// Arguments outside an operation's domain.
class InputError : public Error {
public:
  using Error::Error;
};

/// A documented size or memory limit would be exceeded; the operation refuses to run.
class LimitError : public Error {
public:
  using Error::Error;
};

/// A mathematical precondition of a check or construction does not hold.
class PreconditionError : public Error {
public:
  using Error::Error;
};

}  // namespace locdense
