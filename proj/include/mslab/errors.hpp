#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace mslab {

// Every failure surfaced by the library carries a stable name (used verbatim
// in CLI error reports) and a kind: validation failures are caller mistakes,
// numerical failures mean an internal computation did not meet its contract.
enum class ErrorKind { validation, numerical };

class Error : public std::runtime_error {
 public:
  Error(std::string name, ErrorKind kind, const std::string& what)
      : std::runtime_error(name + ": " + what), name_(std::move(name)), kind_(kind) {}

  const std::string& name() const noexcept { return name_; }
  ErrorKind kind() const noexcept { return kind_; }
  bool is_validation() const noexcept { return kind_ == ErrorKind::validation; }

 private:
  std::string name_;
  ErrorKind kind_;
};

#define MSLAB_ERROR(NAME, KIND)                      \
  class NAME : public Error {                        \
   public:                                           \
    explicit NAME(const std::string& what)           \
        : Error(#NAME, ErrorKind::KIND, what) {}     \
  };

MSLAB_ERROR(ZeroPolynomial, validation)
MSLAB_ERROR(PoleOnCircle, validation)
MSLAB_ERROR(PoleAtOrigin, validation)
MSLAB_ERROR(PoleInDisk, validation)
MSLAB_ERROR(NearPole, validation)
MSLAB_ERROR(VNotInDisk, validation)
MSLAB_ERROR(LambdaNotInDisk, validation)
MSLAB_ERROR(ThetaNotVanishingAtZero, validation)
MSLAB_ERROR(NotIsometric, validation)
MSLAB_ERROR(NotNormalized, validation)
MSLAB_ERROR(ClarkBoundary, validation)
MSLAB_ERROR(SingularGram, validation)
MSLAB_ERROR(AllVanishAtOrigin, validation)
MSLAB_ERROR(DimensionMismatch, validation)
MSLAB_ERROR(WZero, validation)
MSLAB_ERROR(NotAnEigenvalue, validation)
MSLAB_ERROR(MultiplicityTooLow, validation)
MSLAB_ERROR(MultiplicityPreconditionFailed, validation)
MSLAB_ERROR(GNotInModelSpace, validation)
MSLAB_ERROR(GVanishesOnCircle, validation)
MSLAB_ERROR(PhiNotVanishingAtZero, validation)
MSLAB_ERROR(GridTooLarge, validation)
MSLAB_ERROR(UnknownExample, validation)
MSLAB_ERROR(ConfigError, validation)

MSLAB_ERROR(QuadratureDivergence, numerical)
MSLAB_ERROR(InternalCheckFailed, numerical)

#undef MSLAB_ERROR

}  // namespace mslab
