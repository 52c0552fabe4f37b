#pragma once

#include <stdexcept>
#include <string>

namespace betalab {

/// Base class for every numerical failure raised by the library. `name()` is
/// the machine-readable identifier printed by the CLI.
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& message)
      : std::runtime_error(message), name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

#define BETALAB_DEFINE_ERROR(Type)                                    \
  class Type : public Error {                                         \
   public:                                                            \
    explicit Type(const std::string& message) : Error(#Type, message) {} \
  };

BETALAB_DEFINE_ERROR(DegenerateImmersion)
BETALAB_DEFINE_ERROR(LagrangianPoint)
BETALAB_DEFINE_ERROR(ComplexPoint)
BETALAB_DEFINE_ERROR(GridTooCoarse)
BETALAB_DEFINE_ERROR(EllipticityViolation)
BETALAB_DEFINE_ERROR(NotCritical)
BETALAB_DEFINE_ERROR(InvalidVariationField)
BETALAB_DEFINE_ERROR(NoSolution)
BETALAB_DEFINE_ERROR(InvalidBeta)
BETALAB_DEFINE_ERROR(InvalidArgument)
BETALAB_DEFINE_ERROR(AsymptoticMismatch)
BETALAB_DEFINE_ERROR(BoundViolation)
BETALAB_DEFINE_ERROR(NumericalFailure)

#undef BETALAB_DEFINE_ERROR

}  // namespace betalab
