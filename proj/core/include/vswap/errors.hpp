#ifndef VSWAP_ERRORS_HPP
#define VSWAP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace vswap {

enum class ErrorCode {
  // input / parameter validation
  FellerViolation,
  CorrelationOutOfRange,
  NonPositiveInitialState,
  DegenerateParameter,
  InvalidWindow,
  GridMismatch,
  ConfigError,
  PreconditionError,
  // numerical failures
  DomainError,
  OutsideMomentDomain,
  QuadratureNonConvergent,
  OdeNonConvergence,
  InadmissibleExponent,
  SingularLinearSystem,
  Overflow,
  SeriesNonConvergent,
  NegativeRadicand,
  FitDomainError,
  StencilOutsideAdmissibleRegion,
  NoRootFound,
};

// Base for everything thrown by the library.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

// Bad inputs: rejected parameters, malformed configs, impossible windows.
// The CLI maps these to exit code 2.
class ValidationError : public Error {
public:
  using Error::Error;
};

// A numerical procedure failed to deliver its contract (non-convergence,
// out-of-domain evaluation, overflow).  CLI exit code 3.
class NumericalError : public Error {
public:
  using Error::Error;
};

}  // namespace vswap

#endif
