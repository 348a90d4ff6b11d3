#pragma once

#include <stdexcept>
#include <string>

namespace trc {

// Error taxonomy mirrored by the CLI exit codes: config=2, data=3, numerical=4.
enum class ErrorCategory { Config, Data, Numerical };

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const { return category_; }

  const char* category_name() const {
    switch (category_) {
      case ErrorCategory::Config: return "config";
      case ErrorCategory::Data: return "data";
      case ErrorCategory::Numerical: return "numerical";
    }
    return "unknown";
  }

 private:
  ErrorCategory category_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message)
      : Error(ErrorCategory::Config, message) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& message)
      : Error(ErrorCategory::Data, message) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& message)
      : Error(ErrorCategory::Numerical, message) {}
};

}  // namespace trc
