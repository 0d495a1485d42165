#pragma once

#include <stdexcept>
#include <string>

namespace qps {

/// Library-wide exception. The C layer maps these onto status codes.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Configuration parse/validation failure, carries the 1-based line number
/// (0 when the error is not tied to a specific line).
class ConfigError : public Error {
 public:
  ConfigError(int line, const std::string& msg)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
        line_(line) {}

  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace qps
