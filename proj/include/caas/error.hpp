#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace caas {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A per-item CUS prediction was requested before the estimator produced one.
class EstimatorNotReady : public Error {
 public:
  using Error::Error;
};

// Negative CUS measurement, negative item count and similar.
class InputDomainError : public Error {
 public:
  using Error::Error;
};

class DeadlineExpired : public Error {
 public:
  using Error::Error;
};

class EngineFault : public Error {
 public:
  using Error::Error;
};

// Invalid configuration value; `field()` names the offending parameter.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// Malformed input text; line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, std::size_t column, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace caas
