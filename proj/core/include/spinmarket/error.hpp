#pragma once

#include <stdexcept>
#include <string>

namespace spinmarket {

// Precondition or validation failure in any module. The CLI maps it to exit 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Config text that fails to parse or validate. Carries the offending line
// (0 when the error is semantic rather than syntactic).
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

// Filesystem failure. The CLI maps it to exit 2.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace spinmarket
