#include "scusum/error.hpp"

#include <sstream>

namespace scusum {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
  case ErrorKind::Parse: return "parse error";
  case ErrorKind::DuplicateKey: return "duplicate key";
  case ErrorKind::Validation: return "validation error";
  case ErrorKind::Domain: return "domain error";
  case ErrorKind::Range: return "range error";
  case ErrorKind::Coverage: return "coverage error";
  case ErrorKind::Io: return "i/o error";
  case ErrorKind::SingularDesign: return "singular design";
  case ErrorKind::Convergence: return "convergence failure";
  case ErrorKind::ModelSelection: return "model selection failure";
  case ErrorKind::HorizonTooShort: return "horizon too short";
  case ErrorKind::Bracketing: return "bracketing failure";
  }
  return "unknown error";
}

bool is_numeric_failure(ErrorKind kind) noexcept {
  switch (kind) {
  case ErrorKind::SingularDesign:
  case ErrorKind::Convergence:
  case ErrorKind::ModelSelection:
  case ErrorKind::HorizonTooShort:
  case ErrorKind::Bracketing:
    return true;
  default:
    return false;
  }
}

namespace {

std::string singular_message(const std::vector<std::string>& columns) {
  std::ostringstream out;
  out << "design matrix is rank deficient; dependent column(s):";
  for (const auto& c : columns) {
    out << ' ' << c;
  }
  return out.str();
}

std::string convergence_message(int iterations, double deviance) {
  std::ostringstream out;
  out << "IRLS did not converge after " << iterations << " iterations (last deviance "
      << deviance << ")";
  return out.str();
}

} // namespace

SingularDesignError::SingularDesignError(std::vector<std::string> columns)
    : Error(ErrorKind::SingularDesign, singular_message(columns)), columns_(std::move(columns)) {}

ConvergenceError::ConvergenceError(int iterations, double last_deviance)
    : Error(ErrorKind::Convergence, convergence_message(iterations, last_deviance)),
      last_deviance_(last_deviance) {}

} // namespace scusum
