#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mteval {

// Input text could not be parsed. `line` is 1-based; 0 when no line applies.
class ParseError : public std::runtime_error {
public:
  explicit ParseError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line != 0 ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}

  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

// Inputs parsed but violate a contract (coverage gap, bad argument, ...).
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Filesystem-level failure (missing file, unwritable output, ...).
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace mteval
