#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vtinv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A caller violated an operation's precondition (shape mismatch, empty input...).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Filesystem or corpus-level problem (missing file, inconsistent record).
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace vtinv
