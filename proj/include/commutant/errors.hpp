#pragma once

#include <stdexcept>
#include <string>

namespace commutant {

/// Base class for every error raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define COMMUTANT_DEFINE_ERROR(Name)        \
  struct Name : Error {                     \
    using Error::Error;                     \
  }

COMMUTANT_DEFINE_ERROR(AdmissibilityError);
COMMUTANT_DEFINE_ERROR(DegenerateError);
COMMUTANT_DEFINE_ERROR(InvalidPolynomial);
COMMUTANT_DEFINE_ERROR(DivisionByZero);
COMMUTANT_DEFINE_ERROR(PoleError);
COMMUTANT_DEFINE_ERROR(DomainError);
COMMUTANT_DEFINE_ERROR(GridError);
COMMUTANT_DEFINE_ERROR(SizeError);
COMMUTANT_DEFINE_ERROR(GridKindError);
COMMUTANT_DEFINE_ERROR(GridMismatch);
COMMUTANT_DEFINE_ERROR(SingularKernelError);
COMMUTANT_DEFINE_ERROR(RegularKernelError);
COMMUTANT_DEFINE_ERROR(GaugeError);
COMMUTANT_DEFINE_ERROR(EigFailure);
COMMUTANT_DEFINE_ERROR(ConfigError);

#undef COMMUTANT_DEFINE_ERROR

}  // namespace commutant
