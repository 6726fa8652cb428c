#pragma once

#include <stdexcept>
#include <string>

namespace hrvsvm {

// Error raised for malformed or out-of-domain input documents. `line` is the
// 1-based line the problem was detected on; end-of-input conditions (such as
// an empty payload) report the position one past the last line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace hrvsvm
