#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace scusum {

enum class ErrorKind {
  Parse,
  DuplicateKey,
  Validation,
  Domain,
  Range,
  Coverage,
  Io,
  SingularDesign,
  Convergence,
  ModelSelection,
  HorizonTooShort,
  Bracketing,
};

const char* to_string(ErrorKind kind) noexcept;

// Input errors are caller mistakes (bad files, bad arguments); numeric
// failures come out of fitting, calibration or root finding.
bool is_numeric_failure(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

class ParseError : public Error {
public:
  ParseError(std::size_t line, const std::string& message)
      : Error(ErrorKind::Parse, "line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

class SingularDesignError : public Error {
public:
  explicit SingularDesignError(std::vector<std::string> columns);

  const std::vector<std::string>& columns() const noexcept { return columns_; }

private:
  std::vector<std::string> columns_;
};

class ConvergenceError : public Error {
public:
  ConvergenceError(int iterations, double last_deviance);

  double last_deviance() const noexcept { return last_deviance_; }

private:
  double last_deviance_;
};

} // namespace scusum
