#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lens {

/// Bad input: malformed files, violated preconditions, inconsistent config.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A validation error tied to a line of a text input.
class ParseError : public ValidationError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : ValidationError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Files that cannot be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lens
