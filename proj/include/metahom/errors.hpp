#pragma once

#include <stdexcept>
#include <string>

namespace metahom {

// Root of every error raised by the library. Each subclass names one failure
// family so callers can map them to exit codes or failed test rows.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define METAHOM_DEFINE_ERROR(Name)            \
  class Name : public Error {                 \
   public:                                    \
    using Error::Error;                       \
  }

METAHOM_DEFINE_ERROR(DomainError);
METAHOM_DEFINE_ERROR(ZeroCellError);
METAHOM_DEFINE_ERROR(DegenerateDatasetError);
METAHOM_DEFINE_ERROR(NoAdmissibleRootError);
METAHOM_DEFINE_ERROR(BoundaryError);
METAHOM_DEFINE_ERROR(ConvergenceError);
METAHOM_DEFINE_ERROR(SeparationError);
METAHOM_DEFINE_ERROR(InvalidRhoError);
METAHOM_DEFINE_ERROR(EmptyInputError);
METAHOM_DEFINE_ERROR(ConfigError);
METAHOM_DEFINE_ERROR(IoError);

#undef METAHOM_DEFINE_ERROR

// Parse failures carry the 1-based line they occurred on (0 when unknown).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace metahom
