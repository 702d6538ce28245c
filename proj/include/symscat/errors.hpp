#pragma once

#include <stdexcept>
#include <string>

namespace symscat {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SYMSCAT_DEFINE_ERROR(Name)            \
  class Name : public Error {                 \
   public:                                    \
    using Error::Error;                       \
  };

// numerics
SYMSCAT_DEFINE_ERROR(SingularMatrix)
SYMSCAT_DEFINE_ERROR(DimensionMismatch)
// network
SYMSCAT_DEFINE_ERROR(OutOfBand)
SYMSCAT_DEFINE_ERROR(UnknownLead)
SYMSCAT_DEFINE_ERROR(SamePort)
SYMSCAT_DEFINE_ERROR(ValidationError)
// scattering
SYMSCAT_DEFINE_ERROR(InconsistentReflection)
// symmetry
SYMSCAT_DEFINE_ERROR(InvalidOperator)
SYMSCAT_DEFINE_ERROR(SymmetryNotSatisfied)
// dynamics
SYMSCAT_DEFINE_ERROR(PacketDoesNotFit)
SYMSCAT_DEFINE_ERROR(PacketNotCleared)
SYMSCAT_DEFINE_ERROR(Instability)

#undef SYMSCAT_DEFINE_ERROR

/// Malformed input document. Carries the line (1-based, 0 if unknown) and the
/// offending field path.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::string field)
      : Error(format(message, line, field)), line_(line), field_(std::move(field)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  static std::string format(const std::string& message, std::size_t line,
                            const std::string& field) {
    std::string out = "parse error";
    if (line > 0) out += " at line " + std::to_string(line);
    if (!field.empty()) out += " in field '" + field + "'";
    return out + ": " + message;
  }

  std::size_t line_;
  std::string field_;
};

}  // namespace symscat
