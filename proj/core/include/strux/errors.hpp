#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace strux {

// Malformed request: bad arguments, mismatched universes, wrong node kinds.
class input_error : public std::runtime_error {
 public:
  explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// An operation's precondition on a circuit/vtree property failed; the message
// names the offending gate or node.
class property_violation : public std::runtime_error {
 public:
  explicit property_violation(const std::string& what) : std::runtime_error(what) {}
};

// Malformed file contents. Line/col are 1-based; 0 means unknown.
class parse_error : public input_error {
 public:
  parse_error(const std::string& what, std::size_t line = 0, std::size_t col = 0)
      : input_error(format(what, line, col)), line_(line), col_(col) {}

  std::size_t line() const { return line_; }
  std::size_t col() const { return col_; }

 private:
  static std::string format(const std::string& what, std::size_t line, std::size_t col) {
    if (line == 0) return what;
    std::string s = "line " + std::to_string(line);
    if (col != 0) s += ", col " + std::to_string(col);
    return s + ": " + what;
  }

  std::size_t line_;
  std::size_t col_;
};

}  // namespace strux
