#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qspin {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Invalid physical input (non-PSD state, m0 out of range, ...).
class InvalidStateError : public Error {
 public:
  using Error::Error;
};

// Solver-side failure: positivity lost, singular system, out-of-range lookup.
class NumericalError : public Error {
 public:
  using Error::Error;
};

struct FieldError {
  std::string path;
  std::string message;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<FieldError> errors)
      : Error(summarize(errors)), errors_(std::move(errors)) {}
  ConfigError(std::string path, std::string message)
      : ConfigError(std::vector<FieldError>{{std::move(path), std::move(message)}}) {}

  const std::vector<FieldError>& errors() const noexcept { return errors_; }

 private:
  static std::string summarize(const std::vector<FieldError>& errors) {
    std::string out = "invalid scenario config";
    for (const auto& e : errors) out += "\n  " + e.path + ": " + e.message;
    return out;
  }

  std::vector<FieldError> errors_;
};

}  // namespace qspin
